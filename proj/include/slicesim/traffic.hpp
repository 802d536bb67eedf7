#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace slicesim {

struct ServiceId {
  int index = 0;
  std::string name;
};

// Per-tile, per-service demand time series. Demand is a mean rate in Mbps
// over the tick, not a volume. Immutable after construction; safe to share
// read-only across concurrent simulations.
struct TraceSet {
  double tick_seconds = 0.0;
  std::vector<std::string> tiles;
  std::vector<ServiceId> services;
  std::vector<Eigen::MatrixXd> demand;  // one (services x ticks) matrix per tile

  Eigen::Index n_ticks() const {
    return demand.empty() ? 0 : demand.front().cols();
  }
  // -1 when absent.
  int tile_index(const std::string& tile) const;
};

// Throws ValidationError on any violated invariant (negative or non-finite
// demand, ragged tick counts, non-positive tick duration).
void validate(const TraceSet& ts);

struct ServiceProfile {
  double base_mbps = 0.0;
  double peak_mbps = 0.0;
  double peak_hour = 12.0;  // 0-24
  double noise_std_mbps = 0.0;
};

struct SyntheticConfig {
  int n_tiles = 50;
  int n_days = 10;
  double tick_seconds = 900.0;
  int spatial_groups = 10;
  std::uint64_t seed = 1;
  std::vector<std::pair<std::string, ServiceProfile>> services;

  // facebook / netflix / spotify diurnal profiles sized so that clusters of
  // a few tiles fit the default slice capacities.
  static SyntheticConfig defaults();
};

void validate(const SyntheticConfig& cfg);

// Column-name mapping for the trace CSV schema
// `tile_id,service,t_index,demand_mbps` (header required).
struct TraceCsvSchema {
  std::string tile_col = "tile_id";
  std::string service_col = "service";
  std::string t_col = "t_index";
  std::string demand_col = "demand_mbps";
};

// Dense load; missing cells are zero-filled, duplicate cells are an
// IntegrityError, malformed rows are a ParseError naming the line.
// Tile and service order is order of first appearance.
TraceSet load_traces(const std::filesystem::path& path, double tick_seconds,
                     const TraceCsvSchema& schema = {});

// Writes every cell (including zeros) so load_traces(save_traces(ts)) == ts.
void save_traces(const TraceSet& ts, const std::filesystem::path& path,
                 const TraceCsvSchema& schema = {});

// Diurnal demand: base + (peak-base) * max(0, sin(pi*(h-peak_hour+6)/12))
// * group_gain + noise, clamped at zero. Deterministic in cfg.seed.
TraceSet generate_synthetic(const SyntheticConfig& cfg);

// Mean over non-overlapping windows of sadi_seconds / tick_seconds ticks;
// the trailing partial window is dropped. sadi_seconds must be an integer
// multiple of ts.tick_seconds.
TraceSet resample(const TraceSet& ts, double sadi_seconds);

}  // namespace slicesim
