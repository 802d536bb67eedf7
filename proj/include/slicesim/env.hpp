#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "slicesim/netmodel.hpp"

namespace slicesim {

// Agent context: normalized energy and average QoS of the previous SADI,
// optionally extended with hour-of-day features.
struct Observation {
  double e_norm = 0.0;
  double qos_prev = 1.0;
  bool has_time = false;
  double sin_hour = 0.0;
  double cos_hour = 0.0;

  int dim() const { return has_time ? 4 : 2; }
  Eigen::VectorXd as_vector() const;
};

// beta * qos - e_norm, range [-1, beta]. Inputs outside [0,1] (or beta < 0)
// are a ValidationError.
double reward(double e_norm, double qos, double beta);

struct StepOutcome {
  double energy_wh = 0.0;
  double e_norm = 0.0;
  double qos = 1.0;
  double reward = 0.0;
  Eigen::VectorXd per_slice_load_mbps;  // non-Eco slices then Eco last
  int n_users = 0;
  int n_migrated = 0;
};

// Pure evaluation of one SADI under one configuration: users of active
// slices stay on their slice, users of inactive slices migrate to the
// EcoSlice.
StepOutcome evaluate_config(const BaseStationModel& bs,
                            const std::vector<ServiceClass>& classes,
                            const Eigen::Ref<const Eigen::VectorXd>& traffic_mbps,
                            const SliceConfig& config, double beta);

struct OracleResult {
  SliceConfig config;
  double reward = 0.0;
};

// Exhaustive search over all 2^S configurations; ties go to fewer active
// slices, then the lower bitmask. Requires S <= 16.
OracleResult oracle_best(const BaseStationModel& bs,
                         const std::vector<ServiceClass>& classes,
                         const Eigen::Ref<const Eigen::VectorXd>& traffic_mbps,
                         double beta);

// SADI-stepped decision environment for one base station. Deterministic;
// a single instance must not be stepped concurrently.
class SliceEnv {
 public:
  // traffic: services x horizon demand at SADI resolution.
  SliceEnv(BaseStationModel bs, std::vector<ServiceClass> classes,
           Eigen::MatrixXd traffic, double beta, double sadi_seconds,
           bool time_features, std::uint64_t seed = 0);

  // Context for the first decision: the all-active outcome at t = 0,
  // without advancing time.
  Observation bootstrap_observation() const;

  struct StepResult {
    Observation observation;  // context for the next decision
    double reward = 0.0;
    StepOutcome outcome;
  };
  // Evaluates the action at the current SADI and advances; throws
  // ValidationError past the horizon.
  StepResult step(const SliceConfig& action);

  int t() const { return t_; }
  int horizon() const { return static_cast<int>(traffic_.cols()); }
  int n_slices() const { return static_cast<int>(bs_.slices.size()); }
  int n_arms() const { return SliceConfig::n_configs(n_slices()); }
  double beta() const { return beta_; }
  const BaseStationModel& base_station() const { return bs_; }
  const StepOutcome& last_outcome() const { return last_outcome_; }
  std::uint64_t seed() const { return seed_; }

  double hour_of(int t) const;

 private:
  Observation make_observation(const StepOutcome& outcome, int next_t) const;

  BaseStationModel bs_;
  std::vector<ServiceClass> classes_;
  Eigen::MatrixXd traffic_;
  double beta_ = 0.0;
  double sadi_seconds_ = 3600.0;
  bool time_features_ = false;
  std::uint64_t seed_ = 0;
  int t_ = 0;
  StepOutcome last_outcome_;
};

}  // namespace slicesim
