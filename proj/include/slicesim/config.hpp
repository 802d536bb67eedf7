#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicesim/bandit.hpp"
#include "slicesim/netmodel.hpp"
#include "slicesim/traffic.hpp"

namespace slicesim {

struct SliceParams {
  double capacity_mbps = 150.0;
  double idle_power_w = 20.0;
  double load_power_w_per_mbps = 0.5;
  double base_delay_ms = 20.0;
};

struct EcoParams {
  double capacity_mbps = 30.0;
  double idle_power_w = 4.0;
  double load_power_w_per_mbps = 0.25;
  double base_delay_ms = 50.0;
};

struct ServiceSpec {
  std::string name;
  int qci = 9;
  double delay_budget_ms = 300.0;
  double per_user_rate_mbps = 1.0;
  SliceParams slice;
};

struct ScenarioConfig {
  double static_power_w = 100.0;
  EcoParams eco;
  std::vector<ServiceSpec> services;

  static ScenarioConfig defaults();
};

struct TrafficSource {
  enum class Kind { synthetic, csv };
  Kind kind = Kind::synthetic;
  std::string csv_path;
  double tick_seconds = 900.0;  // tick duration of a CSV trace
  SyntheticConfig synthetic = SyntheticConfig::defaults();
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  double sadi_seconds = 3600.0;
  double beta = 5.0;
  long horizon_sadis = 240;
  long eval_sadis = 0;  // trailing greedy/no-learning phase
  int cluster_k = 10;
  bool time_features = false;
  std::vector<std::string> agents{"dcmab", "thompson", "random", "allactive"};
  DcmabConfig dcmab;
  ThompsonConfig thompson;
  ScenarioConfig scenario = ScenarioConfig::defaults();
  TrafficSource traffic;
  std::string out_dir = "run";
};

// Throws ValidationError with the offending field named.
void validate(const ExperimentConfig& cfg);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

// JSON with // and /* */ comments permitted.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Scenario service classes and a base-station model template.
std::vector<ServiceClass> service_classes(const ScenarioConfig& scenario);
BaseStationModel base_station_from_scenario(const ScenarioConfig& scenario,
                                            const std::string& id,
                                            double sadi_hours);

}  // namespace slicesim
