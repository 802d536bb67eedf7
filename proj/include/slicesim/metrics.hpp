#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace slicesim {

struct HistoryRow {
  std::string bs_id;
  long t = 0;
  unsigned action_mask = 0;
  double reward = 0.0;
  double oracle_reward = 0.0;
  double energy_wh = 0.0;
  double e_norm = 0.0;
  double qos = 1.0;
  long n_users = 0;
  long n_migrated = 0;
};

struct RunHistory {
  std::string agent_kind;
  double beta = 0.0;
  std::uint64_t seed = 0;
  long horizon = 0;
  std::vector<HistoryRow> rows;  // grouped by bs, t ascending within a bs

  std::vector<std::string> bs_ids() const;  // first-appearance order
};

struct RegretCurves {
  std::vector<std::string> bs_ids;
  std::vector<Eigen::VectorXd> per_bs;  // cumulative, length = horizon
  Eigen::VectorXd aggregate;            // summed across base stations
};

// regret_t = sum_{u <= t} (oracle_reward_u - reward_u); non-decreasing when
// the oracle dominates. Throws ValidationError on missing oracle values.
RegretCurves cumulative_regret(const RunHistory& h);

// 100 * (1 - total_energy(agent) / total_energy(reference)); negative when
// the agent consumes more. Requires matching horizons and base stations.
double energy_improvement_pct(const RunHistory& agent,
                              const RunHistory& reference);

struct SummaryEntry {
  long n_rows = 0;
  double mean_reward = 0.0;
  double final_cumulative_regret = 0.0;
  double total_energy_wh = 0.0;
  double energy_improvement_pct = 0.0;
  double mean_qos = 0.0;
  double mean_migrations_per_sadi = 0.0;
};

struct Summary {
  std::string agent_kind;
  std::string reference_kind;
  double beta = 0.0;
  std::uint64_t seed = 0;
  long horizon = 0;
  std::map<std::string, SummaryEntry> per_bs;
  SummaryEntry aggregate;
};

Summary summarize(const RunHistory& h, const RunHistory& reference);

nlohmann::json to_json(const SummaryEntry& e);
nlohmann::json to_json(const Summary& s);

// history.csv:
// bs_id,t,action_mask,reward,oracle_reward,energy_wh,e_norm,qos,n_users,n_migrated
void save_history_csv(const RunHistory& h, const std::filesystem::path& path);
RunHistory load_history_csv(const std::filesystem::path& path);

}  // namespace slicesim
