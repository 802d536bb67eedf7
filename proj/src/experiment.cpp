#include "slicesim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>

#include "slicesim/bandit.hpp"
#include "slicesim/clustering.hpp"
#include "slicesim/errors.hpp"

namespace slicesim {

namespace {

struct BsRun {
  std::map<std::string, std::vector<HistoryRow>> rows;  // agent -> rows
  std::map<std::string, nlohmann::json> checkpoints;
};

BsRun run_base_station(const ExperimentConfig& cfg,
                       const std::vector<ServiceClass>& classes,
                       const std::string& bs_id, int bs_index,
                       const Eigen::MatrixXd& traffic,
                       const std::vector<std::string>& agents) {
  const double sadi_hours = cfg.sadi_seconds / 3600.0;
  const BaseStationModel bs =
      base_station_from_scenario(cfg.scenario, bs_id, sadi_hours);
  const auto horizon = static_cast<int>(traffic.cols());
  const long train_end = cfg.horizon_sadis - cfg.eval_sadis;

  // Shared per-step oracle so every agent is scored against the same bar.
  std::vector<OracleResult> oracle(horizon);
  for (int t = 0; t < horizon; ++t)
    oracle[t] = oracle_best(bs, classes, traffic.col(t), cfg.beta);

  BsRun run;
  const int n_slices = static_cast<int>(bs.slices.size());
  const int context_dim = cfg.time_features ? 4 : 2;
  for (const auto& kind : agents) {
    const std::uint64_t seed =
        derive_seed(cfg.seed, agent_stream_id(kind), bs_index);
    auto agent = make_agent(kind, context_dim, SliceConfig::n_configs(n_slices),
                            cfg.dcmab, cfg.thompson, seed);
    SliceEnv env(bs, classes, traffic, cfg.beta, cfg.sadi_seconds,
                 cfg.time_features, seed);
    Observation obs = env.bootstrap_observation();
    auto& rows = run.rows[kind];
    rows.reserve(horizon);
    for (int t = 0; t < horizon; ++t) {
      if (t == train_end) agent->freeze();
      const int arm = agent->select_action(obs);
      const auto res = env.step(SliceConfig{static_cast<unsigned>(arm), n_slices});
      agent->update(obs, arm, res.reward);
      rows.push_back({bs_id, t, static_cast<unsigned>(arm), res.reward,
                      oracle[t].reward, res.outcome.energy_wh,
                      res.outcome.e_norm, res.outcome.qos,
                      res.outcome.n_users, res.outcome.n_migrated});
      obs = res.observation;
    }
    run.checkpoints[kind][bs_id] = agent->checkpoint();
  }
  return run;
}

}  // namespace

RunResult simulate_agents(const ExperimentConfig& cfg, const TraceSet& bs_sadi) {
  if (cfg.horizon_sadis > bs_sadi.n_ticks())
    throw ValidationError("simulate: horizon_sadis exceeds available SADIs (" +
                          std::to_string(bs_sadi.n_ticks()) + ")");
  if (bs_sadi.services.size() != cfg.scenario.services.size())
    throw ValidationError("simulate: trace services do not match the scenario");

  RunResult result;
  result.agents = cfg.agents;
  if (std::find(result.agents.begin(), result.agents.end(), "allactive") ==
      result.agents.end())
    result.agents.push_back("allactive");  // always run the reference

  const auto classes = service_classes(cfg.scenario);
  const auto n_bs = static_cast<int>(bs_sadi.tiles.size());

  // Per-BS simulations are independent; seeds are derived from
  // (master, agent kind, bs index), so scheduling cannot change results.
  std::vector<std::future<BsRun>> futures;
  futures.reserve(n_bs);
  for (int b = 0; b < n_bs; ++b) {
    Eigen::MatrixXd traffic =
        bs_sadi.demand[b].leftCols(cfg.horizon_sadis);
    futures.push_back(std::async(
        std::launch::async, run_base_station, std::cref(cfg),
        std::cref(classes), bs_sadi.tiles[b], b, std::move(traffic),
        std::cref(result.agents)));
  }

  std::map<std::string, nlohmann::json> checkpoints;
  for (auto& kind : result.agents) {
    auto& h = result.histories[kind];
    h.agent_kind = kind;
    h.beta = cfg.beta;
    h.seed = cfg.seed;
    h.horizon = cfg.horizon_sadis;
  }
  for (auto& fut : futures) {
    BsRun run = fut.get();
    for (const auto& kind : result.agents) {
      auto& rows = result.histories[kind].rows;
      rows.insert(rows.end(), run.rows[kind].begin(), run.rows[kind].end());
      checkpoints[kind].update(run.checkpoints[kind]);
    }
  }
  for (const auto& kind : result.agents)
    result.summaries.emplace(
        kind, summarize(result.histories[kind], result.histories["allactive"]));
  result.checkpoint_json = std::move(checkpoints);
  return result;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);

  TraceSet raw;
  if (cfg.traffic.kind == TrafficSource::Kind::csv)
    raw = load_traces(cfg.traffic.csv_path, cfg.traffic.tick_seconds);
  else
    raw = generate_synthetic(cfg.traffic.synthetic);

  if (cfg.cluster_k > static_cast<int>(raw.tiles.size()))
    throw ValidationError("config: clustering k exceeds the tile count");

  ClusterAssignment assignment;
  if (raw.tiles.size() == 1) {
    assignment.tiles = raw.tiles;
    assignment.labels = {0};
    assignment.k = 1;
  } else {
    assignment = ward_cluster(corr_distance_matrix(raw), cfg.cluster_k,
                              raw.tiles);
  }
  const TraceSet bs_sadi =
      resample(aggregate_clusters(raw, assignment), cfg.sadi_seconds);

  RunResult result = simulate_agents(cfg, bs_sadi);

  RunArtifacts art;
  art.out_dir = cfg.out_dir;
  std::filesystem::create_directories(art.out_dir);

  art.config_snapshot = art.out_dir / "config.json";
  {
    std::ofstream out(art.config_snapshot);
    out << to_json(cfg).dump(2) << '\n';
    if (!out) throw ParseError("run: cannot write config snapshot");
  }
  art.cluster_assignment = art.out_dir / "clusters.csv";
  save_assignment(assignment, art.cluster_assignment);
  art.merge_history = art.out_dir / "merges.csv";
  save_merge_history(assignment, art.merge_history);

  nlohmann::json summary;
  summary["beta"] = cfg.beta;
  summary["seed"] = cfg.seed;
  summary["horizon_sadis"] = cfg.horizon_sadis;
  summary["eval_sadis"] = cfg.eval_sadis;
  summary["n_base_stations"] = bs_sadi.tiles.size();
  summary["reference"] = "allactive";
  // Timestamps are metadata only; nothing else may depend on wall time.
  summary["generated_at_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  for (const auto& kind : result.agents) {
    const auto hist_path = art.out_dir / ("history_" + kind + ".csv");
    save_history_csv(result.histories.at(kind), hist_path);
    art.histories[kind] = hist_path;
    summary["agents"][kind] = to_json(result.summaries.at(kind));
    if (kind == "dcmab" || kind == "thompson") {
      const auto ckpt_path = art.out_dir / ("checkpoint_" + kind + ".json");
      std::ofstream out(ckpt_path);
      out << result.checkpoint_json.at(kind).dump(2) << '\n';
      if (!out) throw ParseError("run: cannot write checkpoint for " + kind);
      art.checkpoints[kind] = ckpt_path;
    }
  }
  art.summary = art.out_dir / "summary.json";
  {
    std::ofstream out(art.summary);
    out << summary.dump(2) << '\n';
    if (!out) throw ParseError("run: cannot write summary");
  }
  art.done_sentinel = art.out_dir / "DONE";
  std::ofstream(art.done_sentinel) << "";
  return art;
}

}  // namespace slicesim
