#pragma once

#include <Eigen/Dense>
#include <bit>
#include <string>
#include <vector>

#include "slicesim/traffic.hpp"

namespace slicesim {

struct ServiceClass {
  ServiceId service;
  int qci = 9;
  double delay_budget_ms = 300.0;
  double per_user_rate_mbps = 1.0;
};

struct SliceSpec {
  int service_index = -1;  // -1 for the EcoSlice
  double capacity_mbps = 0.0;
  double idle_power_w = 0.0;
  double load_power_w_per_mbps = 0.0;
  double base_delay_ms = 0.0;
  bool is_eco = false;
};

// Activation bitmask over the non-Eco slices; the EcoSlice is always on and
// never appears in the mask. Arm index == mask value.
struct SliceConfig {
  unsigned mask = 0;
  int n_slices = 0;

  bool active(int slice) const { return (mask >> slice) & 1u; }
  int n_active() const { return std::popcount(mask); }
  static SliceConfig all_active(int n_slices) {
    return {(1u << n_slices) - 1u, n_slices};
  }
  static int n_configs(int n_slices) { return 1 << n_slices; }
};

struct BaseStationModel {
  std::string id;
  double static_power_w = 0.0;
  std::vector<SliceSpec> slices;  // non-Eco, ordered by service index
  SliceSpec eco;
  double sadi_hours = 1.0;
  double e_max_wh_per_sadi = 0.0;  // full activation at capacity
};

// Computes the e_max normalizer; throws ValidationError on bad parameters.
BaseStationModel make_base_station(std::string id, double static_power_w,
                                   std::vector<SliceSpec> slices,
                                   SliceSpec eco, double sadi_hours);

struct UserSession {
  int service_index = 0;
  double demand_mbps = 0.0;
  double delay_req_ms = 0.0;
};

// ceil(demand / per-user rate) equal-share sessions; empty at zero demand.
std::vector<UserSession> sessions_from_demand(double demand_mbps,
                                              const ServiceClass& sc);

// Processor-sharing law: base_delay / (1 - load/capacity), infinite at or
// beyond capacity.
double slice_delay_ms(double offered_load_mbps, const SliceSpec& spec);

// (idle + slope * min(load, capacity)) * sadi_hours when active, else 0.
double slice_energy_wh(double offered_load_mbps, const SliceSpec& spec,
                       bool active, double sadi_hours);

// Static term + configured non-Eco slices + the always-on EcoSlice.
// per_slice_load_mbps has one entry per non-Eco slice plus the Eco load last.
double bs_energy_wh(const SliceConfig& config,
                    const Eigen::Ref<const Eigen::VectorXd>& per_slice_load_mbps,
                    const BaseStationModel& bs, double sadi_hours);

// Fraction of users whose serving slice's delay meets their requirement;
// 1.0 with no users. placement maps each user to a slice index, with
// bs.slices.size() denoting the EcoSlice. Throws ContractError when a user
// sits on an inactive slice.
double qos(const std::vector<UserSession>& users,
           const std::vector<int>& placement, const SliceConfig& config,
           const Eigen::Ref<const Eigen::VectorXd>& per_slice_load_mbps,
           const BaseStationModel& bs);

}  // namespace slicesim
