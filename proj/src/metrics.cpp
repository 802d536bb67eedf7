#include "slicesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "slicesim/errors.hpp"
#include "slicesim/io.hpp"

namespace slicesim {

std::vector<std::string> RunHistory::bs_ids() const {
  std::vector<std::string> ids;
  for (const auto& r : rows)
    if (ids.empty() || ids.back() != r.bs_id)
      if (std::find(ids.begin(), ids.end(), r.bs_id) == ids.end())
        ids.push_back(r.bs_id);
  return ids;
}

RegretCurves cumulative_regret(const RunHistory& h) {
  if (h.rows.empty()) throw ValidationError("cumulative_regret: empty history");
  RegretCurves out;
  out.bs_ids = h.bs_ids();

  std::map<std::string, std::vector<const HistoryRow*>> by_bs;
  for (const auto& r : h.rows) {
    if (!std::isfinite(r.oracle_reward))
      throw ValidationError("cumulative_regret: missing oracle reward");
    by_bs[r.bs_id].push_back(&r);
  }

  Eigen::Index horizon = -1;
  for (const auto& id : out.bs_ids) {
    auto& rows = by_bs[id];
    std::sort(rows.begin(), rows.end(),
              [](const HistoryRow* a, const HistoryRow* b) { return a->t < b->t; });
    if (horizon < 0) horizon = static_cast<Eigen::Index>(rows.size());
    if (static_cast<Eigen::Index>(rows.size()) != horizon)
      throw ValidationError("cumulative_regret: ragged horizons across base stations");
    Eigen::VectorXd curve(horizon);
    double acc = 0.0;
    for (Eigen::Index t = 0; t < horizon; ++t) {
      acc += rows[t]->oracle_reward - rows[t]->reward;
      curve(t) = acc;
    }
    out.per_bs.push_back(std::move(curve));
  }

  out.aggregate = Eigen::VectorXd::Zero(horizon);
  for (const auto& c : out.per_bs) out.aggregate += c;
  return out;
}

namespace {

void check_comparable(const RunHistory& a, const RunHistory& b,
                      const char* what) {
  if (a.horizon != b.horizon)
    throw ValidationError(std::string(what) + ": horizons differ");
  if (a.rows.size() != b.rows.size())
    throw ValidationError(std::string(what) + ": row counts differ");
  const auto ids_a = a.bs_ids();
  const auto ids_b = b.bs_ids();
  if (std::set<std::string>(ids_a.begin(), ids_a.end()) !=
      std::set<std::string>(ids_b.begin(), ids_b.end()))
    throw ValidationError(std::string(what) + ": base station sets differ");
}

double total_energy(const RunHistory& h, const std::string& bs = {}) {
  double e = 0.0;
  for (const auto& r : h.rows)
    if (bs.empty() || r.bs_id == bs) e += r.energy_wh;
  return e;
}

SummaryEntry entry_for(const RunHistory& h, const RunHistory& ref,
                       const std::string& bs) {
  SummaryEntry e;
  double ref_energy = 0.0;
  for (const auto& r : h.rows) {
    if (!bs.empty() && r.bs_id != bs) continue;
    ++e.n_rows;
    e.mean_reward += r.reward;
    e.final_cumulative_regret += r.oracle_reward - r.reward;
    e.total_energy_wh += r.energy_wh;
    e.mean_qos += r.qos;
    e.mean_migrations_per_sadi += static_cast<double>(r.n_migrated);
  }
  ref_energy = total_energy(ref, bs);
  if (e.n_rows > 0) {
    e.mean_reward /= static_cast<double>(e.n_rows);
    e.mean_qos /= static_cast<double>(e.n_rows);
    e.mean_migrations_per_sadi /= static_cast<double>(e.n_rows);
  }
  e.energy_improvement_pct =
      ref_energy > 0.0 ? 100.0 * (1.0 - e.total_energy_wh / ref_energy) : 0.0;
  return e;
}

}  // namespace

double energy_improvement_pct(const RunHistory& agent,
                              const RunHistory& reference) {
  check_comparable(agent, reference, "energy_improvement");
  const double ref = total_energy(reference);
  if (!(ref > 0.0))
    throw ValidationError("energy_improvement: reference energy must be > 0");
  return 100.0 * (1.0 - total_energy(agent) / ref);
}

Summary summarize(const RunHistory& h, const RunHistory& reference) {
  check_comparable(h, reference, "summarize");
  Summary s;
  s.agent_kind = h.agent_kind;
  s.reference_kind = reference.agent_kind;
  s.beta = h.beta;
  s.seed = h.seed;
  s.horizon = h.horizon;
  for (const auto& bs : h.bs_ids()) s.per_bs[bs] = entry_for(h, reference, bs);
  s.aggregate = entry_for(h, reference, {});
  return s;
}

nlohmann::json to_json(const SummaryEntry& e) {
  return {{"n_rows", e.n_rows},
          {"mean_reward", e.mean_reward},
          {"final_cumulative_regret", e.final_cumulative_regret},
          {"total_energy_wh", e.total_energy_wh},
          {"energy_improvement_pct", e.energy_improvement_pct},
          {"mean_qos", e.mean_qos},
          {"mean_migrations_per_sadi", e.mean_migrations_per_sadi}};
}

nlohmann::json to_json(const Summary& s) {
  nlohmann::json j;
  j["agent"] = s.agent_kind;
  j["reference"] = s.reference_kind;
  j["beta"] = s.beta;
  j["seed"] = s.seed;
  j["horizon"] = s.horizon;
  j["aggregate"] = to_json(s.aggregate);
  nlohmann::json per_bs;
  for (const auto& [bs, e] : s.per_bs) per_bs[bs] = to_json(e);
  j["per_bs"] = std::move(per_bs);
  return j;
}

void save_history_csv(const RunHistory& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("save_history_csv: cannot open " + path.string());
  out << "bs_id,t,action_mask,reward,oracle_reward,energy_wh,e_norm,qos,"
         "n_users,n_migrated\n";
  for (const auto& r : h.rows)
    out << r.bs_id << ',' << r.t << ',' << r.action_mask << ','
        << format_double(r.reward) << ',' << format_double(r.oracle_reward)
        << ',' << format_double(r.energy_wh) << ',' << format_double(r.e_norm)
        << ',' << format_double(r.qos) << ',' << r.n_users << ','
        << r.n_migrated << '\n';
  if (!out)
    throw ParseError("save_history_csv: write failed for " + path.string());
}

RunHistory load_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_history_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("load_history_csv: empty file " + path.string());
  RunHistory h;
  std::size_t line_no = 1;
  long max_t = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10)
      throw ParseError("history line " + std::to_string(line_no) +
                       ": expected 10 fields");
    HistoryRow r;
    r.bs_id = std::string(f[0]);
    r.t = parse_long(f[1], line_no);
    r.action_mask = static_cast<unsigned>(parse_long(f[2], line_no));
    r.reward = parse_double(f[3], line_no);
    r.oracle_reward = parse_double(f[4], line_no);
    r.energy_wh = parse_double(f[5], line_no);
    r.e_norm = parse_double(f[6], line_no);
    r.qos = parse_double(f[7], line_no);
    r.n_users = parse_long(f[8], line_no);
    r.n_migrated = parse_long(f[9], line_no);
    max_t = std::max(max_t, r.t);
    h.rows.push_back(std::move(r));
  }
  h.horizon = max_t + 1;
  return h;
}

}  // namespace slicesim
