#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "slicesim/errors.hpp"
#include "slicesim/rng.hpp"
#include "slicesim/traffic.hpp"

using namespace slicesim;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "slicesim_test_traffic";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

SyntheticConfig tiny_config() {
  SyntheticConfig cfg;
  cfg.n_tiles = 4;
  cfg.n_days = 1;
  cfg.tick_seconds = 3600.0;
  cfg.spatial_groups = 2;
  cfg.seed = 7;
  cfg.services = {{"facebook", {1.0, 3.0, 20.0, 0.0}},
                  {"netflix", {0.5, 2.0, 22.0, 0.0}}};
  return cfg;
}

}  // namespace

TEST_CASE("load_traces transcribes rows into the dense demand array") {
  const auto p = temp_file("basic.csv");
  write_file(p,
             "tile_id,service,t_index,demand_mbps\n"
             "t0,facebook,0,1.5\n"
             "t0,facebook,1,2.0\n");
  const TraceSet ts = load_traces(p, 900.0);
  REQUIRE(ts.tiles == std::vector<std::string>{"t0"});
  REQUIRE(ts.services.size() == 1);
  CHECK(ts.services[0].name == "facebook");
  REQUIRE(ts.n_ticks() == 2);
  CHECK(ts.demand[0](0, 0) == 1.5);
  CHECK(ts.demand[0](0, 1) == 2.0);
}

TEST_CASE("load_traces zero-fills missing cells") {
  const auto p = temp_file("sparse.csv");
  write_file(p,
             "tile_id,service,t_index,demand_mbps\n"
             "t0,facebook,0,1.0\n"
             "t0,netflix,0,2.0\n"
             "t0,facebook,1,1.25\n");
  const TraceSet ts = load_traces(p, 900.0);
  const int nf = 1;  // order of first appearance
  CHECK(ts.demand[0](nf, 1) == 0.0);
}

TEST_CASE("load_traces rejects negative demand with the line number") {
  const auto p = temp_file("negative.csv");
  write_file(p,
             "tile_id,service,t_index,demand_mbps\n"
             "t0,facebook,0,1.0\n"
             "t0,facebook,1,-1.0\n");
  CHECK_THROWS_WITH_AS(load_traces(p, 900.0),
                       doctest::Contains("line 3"), ParseError);
}

TEST_CASE("load_traces rejects non-numeric demand and duplicate cells") {
  const auto bad = temp_file("nan.csv");
  write_file(bad,
             "tile_id,service,t_index,demand_mbps\n"
             "t0,facebook,0,abc\n");
  CHECK_THROWS_AS(load_traces(bad, 900.0), ParseError);

  const auto dup = temp_file("dup.csv");
  write_file(dup,
             "tile_id,service,t_index,demand_mbps\n"
             "t0,facebook,0,1.0\n"
             "t0,facebook,0,2.0\n");
  CHECK_THROWS_AS(load_traces(dup, 900.0), IntegrityError);
}

TEST_CASE("save/load round-trip is the identity") {
  SyntheticConfig cfg = tiny_config();
  cfg.services[0].second.noise_std_mbps = 0.3;  // irrational-ish values
  const TraceSet ts = generate_synthetic(cfg);
  const auto p = temp_file("roundtrip.csv");
  save_traces(ts, p);
  const TraceSet back = load_traces(p, ts.tick_seconds);
  REQUIRE(back.tiles == ts.tiles);
  REQUIRE(back.services.size() == ts.services.size());
  REQUIRE(back.n_ticks() == ts.n_ticks());
  for (std::size_t i = 0; i < ts.tiles.size(); ++i)
    CHECK(back.demand[i] == ts.demand[i]);  // bitwise
}

TEST_CASE("generate_synthetic is deterministic in the seed") {
  SyntheticConfig cfg = tiny_config();
  cfg.services[0].second.noise_std_mbps = 0.5;
  const TraceSet a = generate_synthetic(cfg);
  const TraceSet b = generate_synthetic(cfg);
  for (std::size_t i = 0; i < a.tiles.size(); ++i)
    CHECK(a.demand[i] == b.demand[i]);

  cfg.seed = 8;
  const TraceSet c = generate_synthetic(cfg);
  CHECK(a.demand[0] != c.demand[0]);
}

TEST_CASE("flat profile with zero noise is exactly constant") {
  SyntheticConfig cfg = tiny_config();
  for (auto& [_, p] : cfg.services) {
    p.base_mbps = 2.0;
    p.peak_mbps = 2.0;
    p.noise_std_mbps = 0.0;
  }
  const TraceSet ts = generate_synthetic(cfg);
  for (const auto& m : ts.demand) CHECK((m.array() == 2.0).all());
}

TEST_CASE("diurnal shape peaks at peak_hour and rests at base") {
  SyntheticConfig cfg = tiny_config();
  cfg.services = {{"facebook", {1.0, 3.0, 20.0, 0.0}}};
  const TraceSet ts = generate_synthetic(cfg);

  // Group gains replay the generator's draw order (gains come first).
  Rng rng(cfg.seed);
  std::vector<double> gain(cfg.spatial_groups);
  for (auto& g : gain) g = rng.uniform(0.5, 1.5);

  for (int tile = 0; tile < cfg.n_tiles; ++tile) {
    const double g = gain[tile % cfg.spatial_groups];
    CHECK(ts.demand[tile](0, 20) == doctest::Approx(1.0 + 2.0 * g).epsilon(1e-12));
    CHECK(ts.demand[tile](0, 8) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("synthetic demand is non-negative under heavy noise") {
  SyntheticConfig cfg = tiny_config();
  for (auto& [_, p] : cfg.services) p.noise_std_mbps = 5.0;
  const TraceSet ts = generate_synthetic(cfg);
  for (const auto& m : ts.demand) CHECK((m.array() >= 0.0).all());
}

TEST_CASE("resample averages whole windows and drops the tail") {
  TraceSet ts;
  ts.tick_seconds = 900.0;
  ts.tiles = {"t0"};
  ts.services = {{0, "facebook"}};
  Eigen::MatrixXd m(1, 5);
  m << 1, 2, 3, 4, 99;
  ts.demand = {m};

  const TraceSet out = resample(ts, 3600.0);
  REQUIRE(out.n_ticks() == 1);  // the 5th tick is dropped
  CHECK(out.demand[0](0, 0) == doctest::Approx(2.5));
  CHECK(out.tick_seconds == 3600.0);

  const TraceSet same = resample(ts, 900.0);
  CHECK(same.demand[0] == ts.demand[0]);

  CHECK_THROWS_AS(resample(ts, 1234.0), ValidationError);
}

TEST_CASE("resample preserves traffic volume over covered ticks") {
  SyntheticConfig cfg = tiny_config();
  cfg.tick_seconds = 900.0;
  for (auto& [_, p] : cfg.services) p.noise_std_mbps = 0.4;
  const TraceSet ts = generate_synthetic(cfg);
  const TraceSet out = resample(ts, 3600.0);
  const Eigen::Index covered = out.n_ticks() * 4;
  for (std::size_t i = 0; i < ts.tiles.size(); ++i) {
    const double vol_in =
        ts.demand[i].leftCols(covered).sum() * ts.tick_seconds;
    const double vol_out = out.demand[i].sum() * out.tick_seconds;
    CHECK(vol_out == doctest::Approx(vol_in).epsilon(1e-9));
  }
}

TEST_CASE("trace validation rejects broken trace sets") {
  TraceSet ts;
  ts.tick_seconds = 0.0;
  CHECK_THROWS_AS(validate(ts), ValidationError);

  SyntheticConfig bad = tiny_config();
  bad.services[0].second.base_mbps = 3.0;
  bad.services[0].second.peak_mbps = 1.0;  // peak < base
  CHECK_THROWS_AS(generate_synthetic(bad), ValidationError);

  bad = tiny_config();
  bad.spatial_groups = 9;  // > n_tiles
  CHECK_THROWS_AS(generate_synthetic(bad), ValidationError);
}
