#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "slicesim/config.hpp"
#include "slicesim/metrics.hpp"

namespace slicesim {

struct RunArtifacts {
  std::filesystem::path out_dir;
  std::filesystem::path config_snapshot;
  std::filesystem::path cluster_assignment;
  std::filesystem::path merge_history;
  std::map<std::string, std::filesystem::path> histories;  // agent -> csv
  std::map<std::string, std::filesystem::path> checkpoints;
  std::filesystem::path summary;
  std::filesystem::path done_sentinel;
};

// In-memory result of a run, independent of the files written.
struct RunResult {
  std::vector<std::string> agents;  // run order; always includes allactive
  std::map<std::string, RunHistory> histories;
  std::map<std::string, Summary> summaries;  // vs the AllActive reference
  std::map<std::string, nlohmann::json> checkpoint_json;  // bs_id -> state
};

// Full pipeline on already-aggregated per-BS SADI traffic. Every agent sees
// identical traffic and identical per-step oracle values.
RunResult simulate_agents(const ExperimentConfig& cfg, const TraceSet& bs_sadi);

// generate/ingest -> cluster -> simulate -> persist. Artifacts are flushed
// before return; the DONE sentinel is written last, so a missing sentinel
// marks a partial run.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

}  // namespace slicesim
