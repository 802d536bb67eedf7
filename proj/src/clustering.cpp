#include "slicesim/clustering.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>

#include "slicesim/io.hpp"

namespace slicesim {

int ClusterAssignment::cluster_of(const std::string& tile) const {
  for (std::size_t i = 0; i < tiles.size(); ++i)
    if (tiles[i] == tile) return labels[i];
  return -1;
}

DistanceMatrix corr_distance_matrix(const TraceSet& ts) {
  validate(ts);
  const auto n = static_cast<Eigen::Index>(ts.tiles.size());
  if (n < 2) throw ValidationError("corr_distance_matrix: need >= 2 tiles");

  std::vector<Eigen::VectorXd> series(n);
  std::vector<bool> constant(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    series[i] = ts.demand[i].colwise().sum().transpose();
    const Eigen::VectorXd dev =
        series[i].array() - series[i].mean();
    constant[i] = dev.squaredNorm() == 0.0;
  }

  DistanceMatrix dm;
  dm.values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (constant[i] || constant[j])
                           ? 1.0
                           : 1.0 - pearson_corr(series[i], series[j]);
      dm.values(i, j) = d;
      dm.values(j, i) = d;
    }
  }
  return dm;
}

ClusterAssignment ward_cluster(const DistanceMatrix& dm, int k,
                               std::vector<std::string> tiles) {
  const auto n = static_cast<int>(dm.size());
  if (dm.values.rows() != dm.values.cols())
    throw ValidationError("ward_cluster: distance matrix not square");
  if (k < 1 || k > n) throw ValidationError("ward_cluster: k out of [1, n]");
  if (!tiles.empty() && static_cast<int>(tiles.size()) != n)
    throw ValidationError("ward_cluster: tile name count mismatch");
  if (tiles.empty()) {
    tiles.reserve(n);
    for (int i = 0; i < n; ++i) tiles.push_back(std::to_string(i));
  }

  // Dendrogram ids 0..n-1 for points, n+step for merged clusters.
  const int total = 2 * n - k;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(total, total);
  d.topLeftCorner(n, n) = dm.values;
  std::vector<int> size(total, 0);
  std::vector<bool> alive(total, false);
  std::vector<std::vector<int>> members(total);
  for (int i = 0; i < n; ++i) {
    size[i] = 1;
    alive[i] = true;
    members[i] = {i};
  }

  ClusterAssignment ca;
  ca.tiles = std::move(tiles);
  ca.k = k;
  std::vector<int> active;
  for (int i = 0; i < n; ++i) active.push_back(i);

  for (int step = 0; step < n - k; ++step) {
    int best_i = -1, best_j = -1;
    double best_d = std::numeric_limits<double>::infinity();
    // Scanning ids in ascending order makes the first minimum win ties,
    // which is exactly the lowest-(left,right) rule.
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const int i = active[a], j = active[b];
        if (d(i, j) < best_d) {
          best_d = d(i, j);
          best_i = i;
          best_j = j;
        }
      }
    }

    const int merged = n + step;
    const int ni = size[best_i], nj = size[best_j];
    for (int m : active) {
      if (m == best_i || m == best_j) continue;
      const int nm = size[m];
      const double dim = d(best_i, m), djm = d(best_j, m);
      const double val =
          ((ni + nm) * dim * dim + (nj + nm) * djm * djm -
           nm * best_d * best_d) /
          static_cast<double>(ni + nj + nm);
      // val >= best_d^2 >= 0 because best_d is the current minimum; the
      // guard only absorbs rounding.
      const double dn = std::sqrt(std::max(val, 0.0));
      d(merged, m) = dn;
      d(m, merged) = dn;
    }
    size[merged] = ni + nj;
    alive[merged] = true;
    alive[best_i] = alive[best_j] = false;
    members[merged] = members[best_i];
    members[merged].insert(members[merged].end(), members[best_j].begin(),
                           members[best_j].end());
    std::erase(active, best_i);
    std::erase(active, best_j);
    active.push_back(merged);
    std::sort(active.begin(), active.end());
    ca.merge_history.push_back({best_i, best_j, best_d, ni + nj});
  }

  // Label clusters 0..k-1 by their smallest member tile index.
  std::vector<std::pair<int, int>> order;  // (min member, cluster id)
  for (int c : active)
    order.emplace_back(*std::min_element(members[c].begin(), members[c].end()),
                       c);
  std::sort(order.begin(), order.end());
  ca.labels.assign(n, -1);
  for (std::size_t label = 0; label < order.size(); ++label)
    for (int tile : members[order[label].second])
      ca.labels[tile] = static_cast<int>(label);
  return ca;
}

TraceSet aggregate_clusters(const TraceSet& ts, const ClusterAssignment& ca) {
  validate(ts);
  if (ca.tiles.size() != ts.tiles.size())
    throw ValidationError("aggregate_clusters: assignment does not cover the trace tiles");
  std::map<std::string, int> position;
  for (std::size_t i = 0; i < ts.tiles.size(); ++i)
    position[ts.tiles[i]] = static_cast<int>(i);

  TraceSet out;
  out.tick_seconds = ts.tick_seconds;
  out.services = ts.services;
  const auto n_svc = static_cast<Eigen::Index>(ts.services.size());
  out.demand.assign(ca.k, Eigen::MatrixXd::Zero(n_svc, ts.n_ticks()));
  for (int c = 0; c < ca.k; ++c) out.tiles.push_back("bs_" + std::to_string(c));

  for (std::size_t i = 0; i < ca.tiles.size(); ++i) {
    const auto it = position.find(ca.tiles[i]);
    if (it == position.end())
      throw ValidationError("aggregate_clusters: unknown tile '" + ca.tiles[i] +
                            "' in assignment");
    out.demand[ca.labels[i]] += ts.demand[it->second];
  }
  return out;
}

void save_assignment(const ClusterAssignment& ca,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("save_assignment: cannot open " + path.string());
  out << "tile_id,cluster_id\n";
  for (std::size_t i = 0; i < ca.tiles.size(); ++i)
    out << ca.tiles[i] << ',' << ca.labels[i] << '\n';
}

void save_merge_history(const ClusterAssignment& ca,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw ParseError("save_merge_history: cannot open " + path.string());
  out << "step,left,right,distance,new_size\n";
  for (std::size_t s = 0; s < ca.merge_history.size(); ++s) {
    const auto& m = ca.merge_history[s];
    out << s << ',' << m.left << ',' << m.right << ','
        << format_double(m.distance) << ',' << m.new_size << '\n';
  }
}

}  // namespace slicesim
