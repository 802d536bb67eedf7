#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "slicesim/errors.hpp"
#include "slicesim/traffic.hpp"

namespace slicesim {

// Symmetric, zero-diagonal, non-negative. Entries lie in [0, 2] when built
// from correlation distances.
struct DistanceMatrix {
  Eigen::MatrixXd values;
  Eigen::Index size() const { return values.rows(); }
};

// One agglomerative merge. Cluster ids follow the usual dendrogram
// numbering: 0..n-1 are the original points, n+step is the cluster created
// at that step.
struct MergeStep {
  int left = 0;
  int right = 0;
  double distance = 0.0;
  int new_size = 0;
};

struct ClusterAssignment {
  std::vector<std::string> tiles;
  std::vector<int> labels;  // tile position -> cluster in [0, k)
  int k = 0;
  std::vector<MergeStep> merge_history;

  // -1 when the tile is unknown.
  int cluster_of(const std::string& tile) const;
};

// Sample Pearson correlation, clamped into [-1, 1] against rounding.
// Throws NumericalError when either series is constant.
template <typename DerivedA, typename DerivedB>
double pearson_corr(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size())
    throw ValidationError("pearson_corr: length mismatch");
  if (a.size() < 2) throw ValidationError("pearson_corr: need length >= 2");
  const double ma = a.mean();
  const double mb = b.mean();
  const auto da = (a.derived().template cast<double>().array() - ma).eval();
  const auto db = (b.derived().template cast<double>().array() - mb).eval();
  const double va = (da * da).sum();
  const double vb = (db * db).sum();
  if (va == 0.0 || vb == 0.0)
    throw NumericalError("pearson_corr: correlation undefined for constant series");
  const double r = (da * db).sum() / std::sqrt(va * vb);
  return std::clamp(r, -1.0, 1.0);
}

// d(i,j) = 1 - pearson(service-summed series i, j). Tiles with constant
// series get the neutral distance 1 to every other tile.
DistanceMatrix corr_distance_matrix(const TraceSet& ts);

// Agglomerative clustering with the Ward Lance-Williams recurrence
//   d(i+j, m) = sqrt(((n_i+n_m) d_im^2 + (n_j+n_m) d_jm^2 - n_m d_ij^2)
//               / (n_i+n_j+n_m)),
// merging the minimum-distance pair each step, ties broken by lowest
// (left id, right id). Cluster labels are ordered by smallest member index.
ClusterAssignment ward_cluster(const DistanceMatrix& dm, int k,
                               std::vector<std::string> tiles = {});

// Sum demand over the member tiles of each cluster; output tiles are the
// cluster ids ("bs_0", "bs_1", ...).
TraceSet aggregate_clusters(const TraceSet& ts, const ClusterAssignment& ca);

// CSV `tile_id,cluster_id`.
void save_assignment(const ClusterAssignment& ca,
                     const std::filesystem::path& path);
// CSV `step,left,right,distance,new_size`.
void save_merge_history(const ClusterAssignment& ca,
                        const std::filesystem::path& path);

}  // namespace slicesim
