#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cdkit {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Returns the edge with endpoints ordered so that u <= v.
constexpr Edge canonical(Edge e) noexcept { return e.u <= e.v ? e : Edge{e.v, e.u}; }

/// Undirected simple graph in compressed sparse row form.
///
/// Every undirected edge {u, v} is stored twice (u -> v and v -> u). Neighbor
/// lists are sorted ascending. Unweighted graphs carry no weight array; all
/// accessors then behave as if every entry had weight 1. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Builds an unweighted graph. Throws std::invalid_argument on self-loops,
  /// duplicate edges or endpoints >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  /// Same as from_edges, with one non-negative weight per edge.
  static Graph from_weighted_edges(std::size_t n, std::span<const Edge> edges,
                                   std::span<const double> weights);

  /// Adopts CSR arrays that already satisfy the class invariants (symmetric,
  /// sorted neighbor lists, no self-loops or duplicates). Only array sizes
  /// are checked; weights may be empty.
  static Graph from_sorted_csr(std::vector<std::size_t> offsets, std::vector<NodeId> adjacency,
                               std::vector<double> weights);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  /// Number of undirected edges M.
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
  bool weighted() const noexcept { return !weights_.empty(); }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  /// Weights aligned with neighbors(v); empty for unweighted graphs.
  std::span<const double> neighbor_weights(NodeId v) const noexcept {
    if (weights_.empty()) return {};
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }

  std::uint32_t degree(NodeId v) const noexcept { return degrees_[v]; }
  /// Weighted degree (equals degree() for unweighted graphs).
  double strength(NodeId v) const noexcept { return strengths_[v]; }
  /// Sum of edge weights, each undirected edge counted once.
  double total_weight() const noexcept { return total_weight_; }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> adjacency() const noexcept { return adjacency_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
  std::span<const double> strengths() const noexcept { return strengths_; }

  bool has_edge(NodeId u, NodeId v) const noexcept;
  /// Weight of edge {u, v}, or 0 when absent.
  double edge_weight(NodeId u, NodeId v) const noexcept;

  /// Canonical (u < v) edge list in ascending order.
  std::vector<Edge> edges() const;

 private:
  static Graph build(std::size_t n, std::span<const Edge> edges, std::span<const double> weights);
  void finalize();

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> degrees_;
  std::vector<double> strengths_;
  double total_weight_ = 0.0;
};

/// Result of merging every community of a partition into one node.
///
/// Super-edge weights count original edges between two communities and
/// self_loop_weight[r] is twice the number of edges inside community r, so
/// the weighted degree of a super-node (strength + self loop) equals the
/// summed degree of its members.
struct SuperGraph {
  Graph graph;
  std::vector<double> self_loop_weight;
  /// original node -> super-node
  std::vector<NodeId> node_map;

  std::size_t node_count() const noexcept { return graph.node_count(); }
  /// Strength plus self-loop weight of a super-node.
  double total_degree(NodeId r) const noexcept { return graph.strength(r) + self_loop_weight[r]; }
  /// Sum of super-edge weights plus half of all self loops; equals the
  /// original edge count M.
  double edge_mass() const noexcept;
};

}  // namespace cdkit
