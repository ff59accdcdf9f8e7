#include "cdkit/coarsen.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace cdkit {
namespace {

SuperGraph coarsen_impl(const Graph& g, std::span<const double> self_loops, const Partition& p) {
  const std::size_t n = g.node_count();
  if (p.size() != n) throw std::invalid_argument("partition does not cover the graph");
  const std::size_t k = p.community_count();
  const auto labels = p.labels();

  // members of community r are order[first[r] .. first[r + 1])
  std::vector<std::size_t> first(k + 1, 0);
  for (Label l : labels) ++first[l + 1];
  for (std::size_t r = 0; r < k; ++r) first[r + 1] += first[r];
  std::vector<NodeId> order(n);
  {
    std::vector<std::size_t> cursor(first.begin(), first.end() - 1);
    for (NodeId v = 0; v < n; ++v) order[cursor[labels[v]]++] = v;
  }

  SuperGraph out;
  out.node_map.assign(labels.begin(), labels.end());
  out.self_loop_weight.assign(k, 0.0);

  std::vector<std::size_t> offsets(k + 1, 0);
  std::vector<NodeId> adjacency;
  std::vector<double> weights;
  std::vector<double> accum(k, 0.0);
  std::vector<char> seen(k, 0);
  std::vector<NodeId> touched;
  for (Label r = 0; r < k; ++r) {
    touched.clear();
    double self = 0.0;
    for (std::size_t m = first[r]; m < first[r + 1]; ++m) {
      const NodeId v = order[m];
      if (!self_loops.empty()) self += self_loops[v];
      const auto nbrs = g.neighbors(v);
      const auto w = g.neighbor_weights(v);
      for (std::size_t e = 0; e < nbrs.size(); ++e) {
        const Label s = labels[nbrs[e]];
        const double weight = w.empty() ? 1.0 : w[e];
        if (s == r) {
          // both orientations are visited, which yields 2x the internal weight
          self += weight;
          continue;
        }
        if (!seen[s]) {
          seen[s] = 1;
          touched.push_back(s);
        }
        accum[s] += weight;
      }
    }
    out.self_loop_weight[r] = self;
    // sorted touched lists give sorted, symmetric CSR rows directly
    std::sort(touched.begin(), touched.end());
    for (NodeId s : touched) {
      adjacency.push_back(s);
      weights.push_back(accum[s]);
      accum[s] = 0.0;
      seen[s] = 0;
    }
    offsets[r + 1] = adjacency.size();
  }
  out.graph = Graph::from_sorted_csr(std::move(offsets), std::move(adjacency), std::move(weights));
  return out;
}

}  // namespace

SuperGraph coarsen(const Graph& g, const Partition& p) { return coarsen_impl(g, {}, p); }

SuperGraph coarsen(const SuperGraph& sg, const Partition& p) {
  return coarsen_impl(sg.graph, sg.self_loop_weight, p);
}

Partition lift(const Partition& super_partition, std::span<const NodeId> node_map) {
  std::vector<Label> labels(node_map.size());
  for (std::size_t v = 0; v < node_map.size(); ++v) {
    if (node_map[v] >= super_partition.size()) throw std::out_of_range("node map refers to a missing super-node");
    labels[v] = super_partition[node_map[v]];
  }
  // labels stay as given when every super-community is used, so lifting an
  // identity super-partition reproduces the coarsened partition exactly
  std::vector<char> used(super_partition.community_count(), 0);
  for (Label l : labels) used[l] = 1;
  if (std::all_of(used.begin(), used.end(), [](char u) { return u != 0; })) return Partition(std::move(labels));
  return Partition::from_labels(labels);
}

}  // namespace cdkit
