#include "cdkit/modularity.hpp"

#include <algorithm>
#include <stdexcept>

namespace cdkit {
namespace {

double modularity_impl(const Graph& g, std::span<const double> self_loops, const Partition& p, double resolution) {
  const std::size_t n = g.node_count();
  if (p.size() != n) throw std::invalid_argument("partition does not cover the graph");
  double two_m = 2.0 * g.total_weight();
  for (double s : self_loops) two_m += s;
  if (!(two_m > 0.0)) throw std::domain_error("modularity is undefined for a graph without edges");

  std::vector<double> inside(p.community_count(), 0.0);
  std::vector<double> total(p.community_count(), 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const Label c = p[v];
    const double loop = self_loops.empty() ? 0.0 : self_loops[v];
    total[c] += g.strength(v) + loop;
    inside[c] += loop;
    const auto nbrs = g.neighbors(v);
    const auto w = g.neighbor_weights(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (p[nbrs[k]] == c) inside[c] += w.empty() ? 1.0 : w[k];
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inside.size(); ++c) {
    q += inside[c] / two_m - resolution * (total[c] / two_m) * (total[c] / two_m);
  }
  return q;
}

}  // namespace

double modularity(const Graph& g, const Partition& p, double resolution) {
  return modularity_impl(g, {}, p, resolution);
}

double modularity(const SuperGraph& sg, const Partition& super_partition, double resolution) {
  return modularity_impl(sg.graph, sg.self_loop_weight, super_partition, resolution);
}

double SparseFeatureMatrix::at(NodeId i, NodeId j) const noexcept {
  const auto first = columns.begin() + static_cast<std::ptrdiff_t>(offsets[i]);
  const auto last = columns.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values[static_cast<std::size_t>(it - columns.begin())];
}

SparseFeatureMatrix reduced_modularity_features(const Graph& g) {
  const double two_m = 2.0 * g.total_weight();
  if (!(two_m > 0.0)) throw std::domain_error("modularity features need at least one edge");
  SparseFeatureMatrix q;
  q.offsets.assign(g.offsets().begin(), g.offsets().end());
  q.columns.assign(g.adjacency().begin(), g.adjacency().end());
  q.values.resize(q.columns.size());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto w = g.neighbor_weights(i);
    for (std::size_t k = q.offsets[i]; k < q.offsets[i + 1]; ++k) {
      const double a = w.empty() ? 1.0 : w[k - q.offsets[i]];
      q.values[k] = a - g.strength(i) * g.strength(q.columns[k]) / two_m;
    }
  }
  return q;
}

}  // namespace cdkit
