#pragma once

#include <span>
#include <vector>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"

namespace cdkit {

/// Newman modularity with a resolution multiplier on the null-model term:
///
///   Q = (1/2m) sum_c [ in_c - resolution * tot_c^2 / 2m ]
///
/// where in_c sums adjacency entries (both orientations) inside c and tot_c
/// sums member degrees. This is exactly the double sum over ordered pairs
/// (diagonal included) for resolution = 1. Throws std::domain_error when the
/// graph has no edge weight.
double modularity(const Graph& g, const Partition& p, double resolution = 1.0);

/// Modularity of a partition of the super-nodes, self loops included; equals
/// the modularity of the lifted partition on the original graph.
double modularity(const SuperGraph& sg, const Partition& super_partition, double resolution = 1.0);

/// Edge-restricted modularity matrix: value k sits at adjacency position k of
/// the source graph, Q~_ij = A_ij - s_i s_j / 2m.
struct SparseFeatureMatrix {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> columns;
  std::vector<double> values;

  std::size_t rows() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  /// Entry (i, j), zero outside the sparsity pattern.
  double at(NodeId i, NodeId j) const noexcept;
};

SparseFeatureMatrix reduced_modularity_features(const Graph& g);

}  // namespace cdkit
