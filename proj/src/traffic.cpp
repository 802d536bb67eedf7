#include "slicesim/traffic.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "slicesim/errors.hpp"
#include "slicesim/io.hpp"
#include "slicesim/rng.hpp"

namespace slicesim {

int TraceSet::tile_index(const std::string& tile) const {
  for (std::size_t i = 0; i < tiles.size(); ++i)
    if (tiles[i] == tile) return static_cast<int>(i);
  return -1;
}

void validate(const TraceSet& ts) {
  if (ts.tick_seconds <= 0.0)
    throw ValidationError("TraceSet: tick_seconds must be > 0");
  if (ts.services.empty()) throw ValidationError("TraceSet: no services");
  if (ts.tiles.size() != ts.demand.size())
    throw ValidationError("TraceSet: tiles/demand size mismatch");
  const Eigen::Index n_svc = static_cast<Eigen::Index>(ts.services.size());
  const Eigen::Index ticks = ts.n_ticks();
  for (std::size_t i = 0; i < ts.demand.size(); ++i) {
    const auto& m = ts.demand[i];
    if (m.rows() != n_svc || m.cols() != ticks)
      throw ValidationError("TraceSet: ragged demand for tile " + ts.tiles[i]);
    if (!m.allFinite() || (m.array() < 0.0).any())
      throw ValidationError("TraceSet: negative or non-finite demand for tile " +
                            ts.tiles[i]);
  }
}

SyntheticConfig SyntheticConfig::defaults() {
  SyntheticConfig cfg;
  cfg.services = {
      {"facebook", {0.3, 2.5, 21.0, 0.15}},
      {"netflix", {0.5, 5.0, 22.0, 0.25}},
      {"spotify", {0.15, 1.2, 8.0, 0.08}},
  };
  return cfg;
}

void validate(const SyntheticConfig& cfg) {
  if (cfg.n_tiles < 1) throw ValidationError("synthetic: n_tiles must be >= 1");
  if (cfg.spatial_groups < 1 || cfg.spatial_groups > cfg.n_tiles)
    throw ValidationError("synthetic: need n_tiles >= spatial_groups >= 1");
  if (cfg.n_days < 1) throw ValidationError("synthetic: n_days must be >= 1");
  if (cfg.tick_seconds <= 0.0)
    throw ValidationError("synthetic: tick_seconds must be > 0");
  if (cfg.services.empty()) throw ValidationError("synthetic: no services");
  for (const auto& [name, p] : cfg.services) {
    if (!(p.peak_mbps >= p.base_mbps && p.base_mbps >= 0.0))
      throw ValidationError("synthetic: need peak >= base >= 0 for " + name);
    if (p.noise_std_mbps < 0.0)
      throw ValidationError("synthetic: negative noise_std for " + name);
    if (p.peak_hour < 0.0 || p.peak_hour > 24.0)
      throw ValidationError("synthetic: peak_hour out of [0,24] for " + name);
  }
}

TraceSet generate_synthetic(const SyntheticConfig& cfg) {
  validate(cfg);
  TraceSet ts;
  ts.tick_seconds = cfg.tick_seconds;
  for (std::size_t s = 0; s < cfg.services.size(); ++s)
    ts.services.push_back({static_cast<int>(s), cfg.services[s].first});

  Rng rng(cfg.seed);
  std::vector<double> gain(cfg.spatial_groups);
  for (auto& g : gain) g = rng.uniform(0.5, 1.5);

  const auto ticks = static_cast<Eigen::Index>(
      std::floor(cfg.n_days * 86400.0 / cfg.tick_seconds));
  const auto n_svc = static_cast<Eigen::Index>(cfg.services.size());

  ts.tiles.reserve(cfg.n_tiles);
  ts.demand.reserve(cfg.n_tiles);
  char name[16];
  for (int tile = 0; tile < cfg.n_tiles; ++tile) {
    std::snprintf(name, sizeof(name), "tile_%04d", tile);
    ts.tiles.emplace_back(name);
    const double g = gain[tile % cfg.spatial_groups];
    Eigen::MatrixXd m(n_svc, ticks);
    for (Eigen::Index s = 0; s < n_svc; ++s) {
      const ServiceProfile& p = cfg.services[s].second;
      for (Eigen::Index t = 0; t < ticks; ++t) {
        const double hour = std::fmod(t * cfg.tick_seconds / 3600.0, 24.0);
        const double shape = std::max(
            0.0, std::sin(std::numbers::pi * (hour - p.peak_hour + 6.0) / 12.0));
        const double noise = rng.normal(0.0, p.noise_std_mbps);
        m(s, t) = std::max(0.0, p.base_mbps +
                                    (p.peak_mbps - p.base_mbps) * shape * g +
                                    noise);
      }
    }
    ts.demand.push_back(std::move(m));
  }
  return ts;
}

TraceSet resample(const TraceSet& ts, double sadi_seconds) {
  validate(ts);
  const double ratio = sadi_seconds / ts.tick_seconds;
  const auto factor = static_cast<Eigen::Index>(std::llround(ratio));
  if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9)
    throw ValidationError(
        "resample: sadi_seconds must be an integer multiple of tick_seconds");

  const Eigen::Index windows = ts.n_ticks() / factor;
  TraceSet out;
  out.tick_seconds = sadi_seconds;
  out.tiles = ts.tiles;
  out.services = ts.services;
  out.demand.reserve(ts.demand.size());
  const auto n_svc = static_cast<Eigen::Index>(ts.services.size());
  for (const auto& m : ts.demand) {
    Eigen::MatrixXd r(n_svc, windows);
    for (Eigen::Index w = 0; w < windows; ++w)
      r.col(w) = m.middleCols(w * factor, factor).rowwise().mean();
    out.demand.push_back(std::move(r));
  }
  return out;
}

namespace {

std::size_t find_column(const std::vector<std::string_view>& header,
                        const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ParseError("trace CSV: missing column '" + name + "'");
}

}  // namespace

TraceSet load_traces(const std::filesystem::path& path, double tick_seconds,
                     const TraceCsvSchema& schema) {
  if (tick_seconds <= 0.0)
    throw ValidationError("load_traces: tick_seconds must be > 0");
  std::ifstream in(path);
  if (!in) throw ParseError("load_traces: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  const std::size_t c_tile = find_column(header, schema.tile_col);
  const std::size_t c_svc = find_column(header, schema.service_col);
  const std::size_t c_t = find_column(header, schema.t_col);
  const std::size_t c_demand = find_column(header, schema.demand_col);

  struct Cell {
    int tile, svc;
    long t;
    double demand;
  };
  std::vector<Cell> cells;
  std::unordered_map<std::string, int> tile_ids, svc_ids;
  std::vector<std::string> tiles, services;
  long max_t = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() < header.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields");
    const long t = parse_long(fields[c_t], line_no);
    if (t < 0)
      throw ParseError("line " + std::to_string(line_no) +
                       ": negative t_index");
    const double d = parse_double(fields[c_demand], line_no);
    if (!(d >= 0.0) || !std::isfinite(d))
      throw ParseError("line " + std::to_string(line_no) +
                       ": negative or non-finite demand_mbps");
    const std::string tile(fields[c_tile]);
    const std::string svc(fields[c_svc]);
    auto [ti, tnew] = tile_ids.try_emplace(tile, static_cast<int>(tiles.size()));
    if (tnew) tiles.push_back(tile);
    auto [si, snew] =
        svc_ids.try_emplace(svc, static_cast<int>(services.size()));
    if (snew) services.push_back(svc);
    cells.push_back({ti->second, si->second, t, d});
    max_t = std::max(max_t, t);
  }
  if (cells.empty()) throw ParseError("trace CSV: no data rows");

  TraceSet ts;
  ts.tick_seconds = tick_seconds;
  ts.tiles = tiles;
  for (std::size_t s = 0; s < services.size(); ++s)
    ts.services.push_back({static_cast<int>(s), services[s]});
  const auto n_svc = static_cast<Eigen::Index>(services.size());
  const Eigen::Index ticks = max_t + 1;
  ts.demand.assign(tiles.size(), Eigen::MatrixXd::Zero(n_svc, ticks));

  std::vector<std::vector<std::uint8_t>> seen(
      tiles.size(), std::vector<std::uint8_t>(n_svc * ticks, 0));
  std::size_t row = 1;
  for (const auto& c : cells) {
    ++row;
    auto& flag = seen[c.tile][c.svc * ticks + c.t];
    if (flag)
      throw IntegrityError("line " + std::to_string(row) +
                           ": duplicate cell (" + tiles[c.tile] + ", " +
                           services[c.svc] + ", " + std::to_string(c.t) + ")");
    flag = 1;
    ts.demand[c.tile](c.svc, c.t) = c.demand;
  }
  validate(ts);
  return ts;
}

void save_traces(const TraceSet& ts, const std::filesystem::path& path,
                 const TraceCsvSchema& schema) {
  validate(ts);
  std::ofstream out(path);
  if (!out) throw ParseError("save_traces: cannot open " + path.string());
  out << schema.tile_col << ',' << schema.service_col << ',' << schema.t_col
      << ',' << schema.demand_col << '\n';
  const Eigen::Index ticks = ts.n_ticks();
  for (std::size_t i = 0; i < ts.tiles.size(); ++i)
    for (std::size_t s = 0; s < ts.services.size(); ++s)
      for (Eigen::Index t = 0; t < ticks; ++t)
        out << ts.tiles[i] << ',' << ts.services[s].name << ',' << t << ','
            << format_double(ts.demand[i](static_cast<Eigen::Index>(s), t))
            << '\n';
  if (!out) throw ParseError("save_traces: write failed for " + path.string());
}

}  // namespace slicesim
