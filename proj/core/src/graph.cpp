#include "cdkit/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cdkit {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) { return build(n, edges, {}); }

Graph Graph::from_weighted_edges(std::size_t n, std::span<const Edge> edges,
                                 std::span<const double> weights) {
  if (weights.size() != edges.size()) {
    throw std::invalid_argument("weight count does not match edge count");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("edge weights must be non-negative");
  }
  return build(n, edges, weights);
}

Graph Graph::build(std::size_t n, std::span<const Edge> edges, std::span<const double> weights) {
  if (n > std::numeric_limits<NodeId>::max()) throw std::invalid_argument("node count too large");
  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw std::invalid_argument("edge endpoint " + std::to_string(std::max(e.u, e.v)) +
                                  " out of range for " + std::to_string(n) + " nodes");
    }
    if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

  const bool weighted = !weights.empty();
  g.adjacency_.resize(2 * edges.size());
  if (weighted) g.weights_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge e = edges[k];
    const std::size_t a = cursor[e.u]++;
    const std::size_t b = cursor[e.v]++;
    g.adjacency_[a] = e.v;
    g.adjacency_[b] = e.u;
    if (weighted) {
      g.weights_[a] = weights[k];
      g.weights_[b] = weights[k];
    }
  }

  // sort each neighbor list (weights follow their neighbor)
  std::vector<std::pair<NodeId, double>> scratch;
  for (std::size_t v = 0; v < n; ++v) {
    const auto first = g.offsets_[v];
    const auto last = g.offsets_[v + 1];
    if (!weighted) {
      std::sort(g.adjacency_.begin() + first, g.adjacency_.begin() + last);
    } else {
      scratch.clear();
      for (auto k = first; k < last; ++k) scratch.emplace_back(g.adjacency_[k], g.weights_[k]);
      std::sort(scratch.begin(), scratch.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto k = first; k < last; ++k) {
        g.adjacency_[k] = scratch[k - first].first;
        g.weights_[k] = scratch[k - first].second;
      }
    }
    for (auto k = first + 1; k < last; ++k) {
      if (g.adjacency_[k] == g.adjacency_[k - 1]) {
        throw std::invalid_argument("duplicate edge {" + std::to_string(v) + ", " +
                                    std::to_string(g.adjacency_[k]) + "}");
      }
    }
  }
  g.finalize();
  return g;
}

Graph Graph::from_sorted_csr(std::vector<std::size_t> offsets, std::vector<NodeId> adjacency,
                             std::vector<double> weights) {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != adjacency.size()) {
    throw std::invalid_argument("CSR offsets do not match the adjacency array");
  }
  if (!weights.empty() && weights.size() != adjacency.size()) {
    throw std::invalid_argument("weight count does not match adjacency size");
  }
  Graph g;
  g.offsets_ = std::move(offsets);
  g.adjacency_ = std::move(adjacency);
  g.weights_ = std::move(weights);
  g.finalize();
  return g;
}

void Graph::finalize() {
  const std::size_t n = node_count();
  degrees_.resize(n);
  strengths_.resize(n);
  double twice_total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    degrees_[v] = static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    double s = static_cast<double>(degrees_[v]);
    if (!weights_.empty()) {
      s = 0.0;
      for (auto k = offsets_[v]; k < offsets_[v + 1]; ++k) s += weights_[k];
    }
    strengths_[v] = s;
    twice_total += s;
  }
  total_weight_ = twice_total / 2.0;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
  if (u >= node_count() || v >= node_count()) return false;
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

double Graph::edge_weight(NodeId u, NodeId v) const noexcept {
  if (u >= node_count() || v >= node_count()) return 0.0;
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  if (weights_.empty()) return 1.0;
  return weights_[offsets_[u] + static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

double SuperGraph::edge_mass() const noexcept {
  double mass = graph.total_weight();
  for (double s : self_loop_weight) mass += s / 2.0;
  return mass;
}

}  // namespace cdkit
