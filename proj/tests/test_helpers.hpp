#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "slicesim/config.hpp"
#include "slicesim/netmodel.hpp"

namespace slicesim::testing {

// Within-cluster spread of one block from pairwise distances:
// SS(C) = (1/|C|) * sum_{i<j in C} d_ij^2.
inline double ward_block_ss(const Eigen::MatrixXd& d,
                            const std::vector<int>& block) {
  if (block.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t a = 0; a < block.size(); ++a)
    for (std::size_t b = a + 1; b < block.size(); ++b)
      s += d(block[a], block[b]) * d(block[a], block[b]);
  return s / static_cast<double>(block.size());
}

inline double ward_partition_objective(
    const Eigen::MatrixXd& d, const std::vector<std::vector<int>>& blocks) {
  double s = 0.0;
  for (const auto& b : blocks) s += ward_block_ss(d, b);
  return s;
}

namespace detail {
inline void enumerate(const Eigen::MatrixXd& d, int n, int k, int next,
                      std::vector<std::vector<int>>& blocks, double& best) {
  if (next == n) {
    if (static_cast<int>(blocks.size()) == k)
      best = std::min(best, ward_partition_objective(d, blocks));
    return;
  }
  // Pruning: remaining elements must be able to fill up to k blocks.
  if (static_cast<int>(blocks.size()) + (n - next) < k) return;
  for (auto& b : blocks) {
    b.push_back(next);
    enumerate(d, n, k, next + 1, blocks, best);
    b.pop_back();
  }
  if (static_cast<int>(blocks.size()) < k) {
    blocks.push_back({next});
    enumerate(d, n, k, next + 1, blocks, best);
    blocks.pop_back();
  }
}
}  // namespace detail

// Brute force over all set partitions into exactly k blocks.
inline double best_ward_objective(const Eigen::MatrixXd& d, int k) {
  const int n = static_cast<int>(d.rows());
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> blocks;
  detail::enumerate(d, n, k, 0, blocks, best);
  return best;
}

inline std::vector<std::vector<int>> blocks_from_labels(
    const std::vector<int>& labels, int k) {
  std::vector<std::vector<int>> blocks(k);
  for (std::size_t i = 0; i < labels.size(); ++i)
    blocks[labels[i]].push_back(static_cast<int>(i));
  return blocks;
}

// The spec's default scenario (3 services) as a ready-made fixture.
inline BaseStationModel default_bs(double sadi_hours = 1.0) {
  return base_station_from_scenario(ScenarioConfig::defaults(), "bs_0",
                                    sadi_hours);
}

inline std::vector<ServiceClass> default_classes() {
  return service_classes(ScenarioConfig::defaults());
}

}  // namespace slicesim::testing
