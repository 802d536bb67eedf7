#include "slicesim/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "slicesim/clustering.hpp"
#include "slicesim/experiment.hpp"
#include "slicesim/io.hpp"

namespace slicesim {

namespace {

namespace fs = std::filesystem;

int run_gen_traffic(const std::string& config_path, std::uint64_t seed,
                    bool seed_set, const std::string& out, int tiles, int days,
                    double tick_seconds, int groups) {
  SyntheticConfig syn = SyntheticConfig::defaults();
  if (!config_path.empty())
    syn = load_experiment_config(config_path).traffic.synthetic;
  if (tiles > 0) syn.n_tiles = tiles;
  if (days > 0) syn.n_days = days;
  if (tick_seconds > 0) syn.tick_seconds = tick_seconds;
  if (groups > 0)
    syn.spatial_groups = groups;
  else
    syn.spatial_groups = std::min(syn.spatial_groups, syn.n_tiles);
  if (seed_set) syn.seed = seed;
  const TraceSet ts = generate_synthetic(syn);
  save_traces(ts, out);
  std::cout << "wrote " << out << ": " << ts.tiles.size() << " tiles, "
            << ts.services.size() << " services, " << ts.n_ticks()
            << " ticks\n";
  return 0;
}

int run_cluster(const std::string& in, int k, const std::string& out_dir,
                double tick_seconds) {
  const TraceSet ts = load_traces(in, tick_seconds);
  const ClusterAssignment ca =
      ward_cluster(corr_distance_matrix(ts), k, ts.tiles);
  fs::create_directories(out_dir);
  save_assignment(ca, fs::path(out_dir) / "clusters.csv");
  save_merge_history(ca, fs::path(out_dir) / "merges.csv");
  std::cout << "clustered " << ts.tiles.size() << " tiles into " << ca.k
            << " base stations -> " << out_dir << "\n";
  return 0;
}

int run_simulate(const std::string& config_path, std::uint64_t seed,
                 bool seed_set, const std::string& out_dir) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed_set) cfg.seed = seed;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  const RunArtifacts art = run_experiment(cfg);
  std::cout << "run complete -> " << art.out_dir.string() << "\n";
  return 0;
}

int run_report(const std::vector<std::string>& run_dirs,
               const std::string& out_file) {
  std::ostringstream table;
  table << "run,agent,beta,total_energy_wh,mean_qos,energy_improvement_pct,"
           "final_cumulative_regret,mean_reward\n";
  for (const auto& dir : run_dirs) {
    const fs::path summary_path = fs::path(dir) / "summary.json";
    std::ifstream in(summary_path);
    if (!in)
      throw ValidationError("report: missing " + summary_path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
    const double beta = j.at("beta").get<double>();
    for (const auto& [agent, s] : j.at("agents").items()) {
      const auto& agg = s.at("aggregate");
      table << dir << ',' << agent << ',' << format_double(beta) << ','
            << format_double(agg.at("total_energy_wh").get<double>()) << ','
            << format_double(agg.at("mean_qos").get<double>()) << ','
            << format_double(agg.at("energy_improvement_pct").get<double>())
            << ','
            << format_double(agg.at("final_cumulative_regret").get<double>())
            << ',' << format_double(agg.at("mean_reward").get<double>())
            << '\n';
    }
  }
  if (out_file.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(out_file);
    out << table.str();
    if (!out) throw ParseError("report: cannot write " + out_file);
    std::cout << "wrote " << out_file << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"slicesim: energy-aware RAN slice activation/deactivation "
               "simulator"};
  app.require_subcommand(1);

  std::string gen_config, gen_out, cl_in, cl_out = ".", sim_config, sim_out,
              rep_out;
  std::uint64_t gen_seed_val = 0, sim_seed_val = 0;
  int tiles = 0, days = 0, groups = 0, k = 10;
  double gen_tick = 0.0, cl_tick = 3600.0;
  std::vector<std::string> run_dirs;

  auto* gen = app.add_subcommand("gen-traffic",
                                 "Generate synthetic diurnal traffic CSV");
  gen->add_option("--config", gen_config, "Experiment config JSON");
  auto* gen_seed = gen->add_option("--seed", gen_seed_val,
                                   "Synthetic seed override");
  gen->add_option("--out", gen_out, "Output CSV path")->required();
  gen->add_option("--tiles", tiles, "Number of tiles");
  gen->add_option("--days", days, "Number of days");
  gen->add_option("--tick-seconds", gen_tick, "Tick duration in seconds");
  gen->add_option("--groups", groups, "Spatial groups");

  auto* cl = app.add_subcommand(
      "cluster", "Group tiles into base stations (Pearson + Ward)");
  cl->add_option("--in", cl_in, "Input trace CSV")->required();
  cl->add_option("--k", k, "Number of clusters");
  cl->add_option("--out", cl_out, "Output directory");
  cl->add_option("--tick-seconds", cl_tick, "Tick duration in seconds");

  auto* sim = app.add_subcommand("simulate", "Run the full experiment");
  sim->add_option("--config", sim_config, "Experiment config JSON")
      ->required();
  auto* sim_seed = sim->add_option("--seed", sim_seed_val,
                                   "Master seed override");
  sim->add_option("--out", sim_out, "Output directory override");

  auto* rep = app.add_subcommand("report",
                                 "Aggregate run directories into one table");
  rep->add_option("dirs", run_dirs, "Run directories")->required();
  rep->add_option("--out", rep_out, "Output CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage/help
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return run_gen_traffic(gen_config, gen_seed_val, !gen_seed->empty(),
                             gen_out, tiles, days, gen_tick, groups);
    if (cl->parsed()) return run_cluster(cl_in, k, cl_out, cl_tick);
    if (sim->parsed())
      return run_simulate(sim_config, sim_seed_val, !sim_seed->empty(),
                          sim_out);
    if (rep->parsed()) return run_report(run_dirs, rep_out);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace slicesim
