#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slicesim/errors.hpp"
#include "slicesim/netmodel.hpp"
#include "slicesim/rng.hpp"
#include "test_helpers.hpp"

using namespace slicesim;
using slicesim::testing::default_bs;
using slicesim::testing::default_classes;

TEST_CASE("sessions_from_demand splits demand into equal-rate users") {
  const ServiceClass sc{{0, "facebook"}, 8, 300.0, 5.0};

  CHECK(sessions_from_demand(0.0, sc).empty());

  const auto exact = sessions_from_demand(10.0, sc);
  REQUIRE(exact.size() == 2);
  CHECK(exact[0].demand_mbps == doctest::Approx(5.0));
  CHECK(exact[0].delay_req_ms == 300.0);

  const auto uneven = sessions_from_demand(11.0, sc);
  REQUIRE(uneven.size() == 3);
  CHECK(uneven[1].demand_mbps == doctest::Approx(3.667).epsilon(1e-3));
}

TEST_CASE("slice_delay follows the processor-sharing law") {
  SliceSpec spec;
  spec.capacity_mbps = 100.0;
  spec.base_delay_ms = 20.0;
  CHECK(slice_delay_ms(0.0, spec) == 20.0);
  CHECK(slice_delay_ms(50.0, spec) == doctest::Approx(40.0));
  CHECK(std::isinf(slice_delay_ms(100.0, spec)));
  CHECK(std::isinf(slice_delay_ms(250.0, spec)));
}

TEST_CASE("slice_energy: inactive is free, load is clamped at capacity") {
  SliceSpec spec;
  spec.capacity_mbps = 100.0;
  spec.idle_power_w = 10.0;
  spec.load_power_w_per_mbps = 2.0;
  spec.base_delay_ms = 20.0;
  CHECK(slice_energy_wh(5.0, spec, false, 1.0) == 0.0);
  CHECK(slice_energy_wh(5.0, spec, true, 1.0) == doctest::Approx(20.0));

  spec.idle_power_w = 0.0;
  spec.load_power_w_per_mbps = 1.0;
  CHECK(slice_energy_wh(200.0, spec, true, 1.0) == doctest::Approx(100.0));
}

TEST_CASE("bs_energy adds static, configured slices, and the EcoSlice") {
  SliceSpec slice;
  slice.service_index = 0;
  slice.capacity_mbps = 100.0;
  slice.idle_power_w = 20.0;
  slice.load_power_w_per_mbps = 0.5;
  slice.base_delay_ms = 20.0;
  SliceSpec eco = slice;
  eco.idle_power_w = 5.0;
  eco.load_power_w_per_mbps = 0.25;
  eco.capacity_mbps = 30.0;
  const BaseStationModel bs =
      make_base_station("bs", 100.0, {slice}, eco, 1.0);

  Eigen::VectorXd loads = Eigen::VectorXd::Zero(2);
  CHECK(bs_energy_wh(SliceConfig{0, 1}, loads, bs, 1.0) ==
        doctest::Approx(105.0));

  // Full activation at capacity reaches the normalizer.
  loads << 100.0, 30.0;
  CHECK(bs_energy_wh(SliceConfig::all_active(1), loads, bs, 1.0) ==
        doctest::Approx(bs.e_max_wh_per_sadi));
}

TEST_CASE("default scenario normalizer") {
  const BaseStationModel bs = default_bs();
  // 100 + 3*(20 + 0.5*150) + (4 + 0.25*30) over one hour
  CHECK(bs.e_max_wh_per_sadi == doctest::Approx(396.5));
}

TEST_CASE("qos counts satisfied users; empty set is vacuously satisfied") {
  const BaseStationModel bs = default_bs();
  const auto classes = default_classes();
  const int eco = static_cast<int>(bs.slices.size());

  Eigen::VectorXd loads = Eigen::VectorXd::Zero(eco + 1);
  CHECK(qos({}, {}, SliceConfig::all_active(3), loads, bs) == 1.0);

  // Saturated facebook slice: delay infinite for everyone on it.
  loads(0) = 150.0;
  std::vector<UserSession> users(4, UserSession{0, 1.0, 300.0});
  std::vector<int> placement(4, 0);
  CHECK(qos(users, placement, SliceConfig::all_active(3), loads, bs) == 0.0);

  // Two users fine on netflix, two doomed on facebook.
  loads(1) = 10.0;
  placement = {0, 0, 1, 1};
  users[2].service_index = users[3].service_index = 1;
  CHECK(qos(users, placement, SliceConfig::all_active(3), loads, bs) == 0.5);

  // Placement on an inactive slice is a contract violation.
  CHECK_THROWS_AS(qos(users, placement, SliceConfig{0b110, 3}, loads, bs),
                  ContractError);
}

TEST_CASE("delay and qos are monotone in load") {
  const BaseStationModel bs = default_bs();
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& spec = bs.slices[rng.uniform_int(bs.slices.size())];
    const double lo = rng.uniform(0.0, spec.capacity_mbps * 1.2);
    const double hi = lo + rng.uniform(0.0, spec.capacity_mbps * 0.5);
    CHECK(slice_delay_ms(hi, spec) >= slice_delay_ms(lo, spec));
  }
}

TEST_CASE("activating a superset never reduces energy") {
  const BaseStationModel bs = default_bs();
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd loads(4);
    for (int i = 0; i < 4; ++i) loads(i) = rng.uniform(0.0, 160.0);
    const unsigned a = static_cast<unsigned>(rng.uniform_int(8));
    const unsigned extra = static_cast<unsigned>(rng.uniform_int(8));
    const unsigned b = a | extra;
    const double ea = bs_energy_wh(SliceConfig{a, 3}, loads, bs, 1.0);
    const double eb = bs_energy_wh(SliceConfig{b, 3}, loads, bs, 1.0);
    CHECK(eb >= ea);
    if (b != a) CHECK(eb > ea);  // idle power is strictly positive
  }
}

TEST_CASE("migrating load to a strictly cheaper Eco never costs energy") {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    SliceSpec slice;
    slice.service_index = 0;
    slice.capacity_mbps = rng.uniform(50.0, 200.0);
    slice.idle_power_w = rng.uniform(5.0, 40.0);
    slice.load_power_w_per_mbps = rng.uniform(0.2, 1.5);
    slice.base_delay_ms = 20.0;
    SliceSpec eco;
    eco.capacity_mbps = rng.uniform(10.0, 60.0);
    eco.idle_power_w = rng.uniform(0.0, slice.idle_power_w * 0.8);
    eco.load_power_w_per_mbps = rng.uniform(0.05, slice.load_power_w_per_mbps * 0.8);
    eco.base_delay_ms = 50.0;
    const BaseStationModel bs =
        make_base_station("bs", rng.uniform(0.0, 200.0), {slice}, eco, 1.0);

    const double load = rng.uniform(0.0, slice.capacity_mbps);
    const double eco_load = rng.uniform(0.0, eco.capacity_mbps);
    Eigen::VectorXd on(2), off(2);
    on << load, eco_load;
    off << 0.0, eco_load + load;
    const double e_on = bs_energy_wh(SliceConfig{1, 1}, on, bs, 1.0);
    const double e_off = bs_energy_wh(SliceConfig{0, 1}, off, bs, 1.0);
    CHECK(e_off <= e_on);
  }
}

TEST_CASE("e_max bounds every configuration with clamped loads") {
  const BaseStationModel bs = default_bs();
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd loads(4);
    for (int i = 0; i < 4; ++i) loads(i) = rng.uniform(0.0, 400.0);
    const unsigned mask = static_cast<unsigned>(rng.uniform_int(8));
    CHECK(bs_energy_wh(SliceConfig{mask, 3}, loads, bs, 1.0) <=
          bs.e_max_wh_per_sadi + 1e-9);
  }
}

TEST_CASE("model construction rejects invalid parameters") {
  SliceSpec bad;
  bad.capacity_mbps = 0.0;
  bad.base_delay_ms = 20.0;
  SliceSpec eco;
  eco.capacity_mbps = 30.0;
  eco.base_delay_ms = 50.0;
  CHECK_THROWS_AS(make_base_station("x", 100.0, {bad}, eco, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(make_base_station("x", 100.0, {}, eco, 1.0),
                  ValidationError);
}
