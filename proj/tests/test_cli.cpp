#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "slicesim/cli.hpp"
#include "slicesim/config.hpp"
#include "slicesim/metrics.hpp"

using namespace slicesim;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"slicesim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "slicesim_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_small_config(const fs::path& path, const fs::path& out_dir,
                        double beta = 5.0) {
  ExperimentConfig cfg;
  cfg.seed = 7;
  cfg.beta = beta;
  cfg.horizon_sadis = 24;
  cfg.cluster_k = 2;
  cfg.agents = {"thompson", "random"};
  cfg.traffic.synthetic.n_tiles = 4;
  cfg.traffic.synthetic.n_days = 1;
  cfg.traffic.synthetic.spatial_groups = 2;
  cfg.traffic.synthetic.tick_seconds = 3600.0;
  cfg.out_dir = out_dir.string();
  std::ofstream out(path);
  out << "// test configuration\n" << to_json(cfg).dump(2) << '\n';
}

}  // namespace

TEST_CASE("unknown subcommands and flags are usage errors") {
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"gen-traffic", "--nope", "x"}) == 2);
  CHECK(run_cli({"gen-traffic"}) == 2);  // --out is required
}

TEST_CASE("gen-traffic is deterministic in the seed") {
  const auto dir = fresh_dir("gen");
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  CHECK(run_cli({"gen-traffic", "--seed", "7", "--tiles", "4", "--days", "1",
                 "--out", a.string()}) == 0);
  CHECK(run_cli({"gen-traffic", "--seed", "7", "--tiles", "4", "--days", "1",
                 "--out", b.string()}) == 0);
  const std::string bytes_a = slurp(a);
  CHECK(!bytes_a.empty());
  CHECK(bytes_a == slurp(b));

  const auto c = dir / "c.csv";
  CHECK(run_cli({"gen-traffic", "--seed", "8", "--tiles", "4", "--days", "1",
                 "--out", c.string()}) == 0);
  CHECK(bytes_a != slurp(c));
}

TEST_CASE("cluster emits exactly k labels") {
  const auto dir = fresh_dir("cluster");
  const auto traces = dir / "traces.csv";
  REQUIRE(run_cli({"gen-traffic", "--seed", "3", "--tiles", "12", "--days",
                   "1", "--groups", "3", "--out", traces.string()}) == 0);
  REQUIRE(run_cli({"cluster", "--in", traces.string(), "--k", "3", "--out",
                   dir.string()}) == 0);

  std::ifstream in(dir / "clusters.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "tile_id,cluster_id");
  std::set<std::string> labels;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    labels.insert(line.substr(line.find(',') + 1));
  }
  CHECK(rows == 12);
  CHECK(labels.size() == 3);
  CHECK(fs::exists(dir / "merges.csv"));
}

TEST_CASE("simulate honors --seed and --out overrides") {
  const auto dir = fresh_dir("simulate");
  const auto cfg_path = dir / "config.json";
  write_small_config(cfg_path, dir / "ignored");
  const auto out = dir / "run1";
  CHECK(run_cli({"simulate", "--config", cfg_path.string(), "--out",
                 out.string()}) == 0);
  CHECK(fs::exists(out / "DONE"));
  CHECK(fs::exists(out / "history_thompson.csv"));
  CHECK(fs::exists(out / "history_allactive.csv"));  // reference always runs

  const auto out2 = dir / "run2";
  CHECK(run_cli({"simulate", "--config", cfg_path.string(), "--seed", "99",
                 "--out", out2.string()}) == 0);
  CHECK(slurp(out / "history_random.csv") !=
        slurp(out2 / "history_random.csv"));
}

TEST_CASE("simulate rejects invalid configs with exit code 2") {
  const auto dir = fresh_dir("simulate_bad");
  const auto cfg_path = dir / "bad.json";
  {
    std::ofstream out(cfg_path);
    out << "{\"beta\": -3}\n";
  }
  CHECK(run_cli({"simulate", "--config", cfg_path.string()}) == 2);
  CHECK(run_cli({"simulate", "--config", (dir / "missing.json").string()}) ==
        2);
}

TEST_CASE("report merges run directories into one table") {
  const auto dir = fresh_dir("report");
  const auto cfg_a = dir / "a.json";
  const auto cfg_b = dir / "b.json";
  write_small_config(cfg_a, dir / "runA", 5.0);
  write_small_config(cfg_b, dir / "runB", 0.8);
  REQUIRE(run_cli({"simulate", "--config", cfg_a.string()}) == 0);
  REQUIRE(run_cli({"simulate", "--config", cfg_b.string()}) == 0);

  const auto table = dir / "table.csv";
  CHECK(run_cli({"report", (dir / "runA").string(), (dir / "runB").string(),
                 "--out", table.string()}) == 0);
  std::ifstream in(table);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "run,agent,beta,total_energy_wh,mean_qos,energy_improvement_pct,"
        "final_cumulative_regret,mean_reward");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 6);  // two runs x three agents

  CHECK(run_cli({"report", (dir / "missing_run").string()}) == 2);
}
