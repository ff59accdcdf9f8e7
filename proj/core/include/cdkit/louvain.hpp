#pragma once

#include <cstdint>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"
#include "cdkit/timing.hpp"

namespace cdkit {

struct LouvainOptions {
  double resolution = 1.0;
  std::uint64_t seed = 0;
  int max_levels = 32;
  Deadline deadline;
};

struct LouvainResult {
  /// over the input nodes (super-nodes for a SuperGraph input)
  Partition partition;
  /// aggregation levels that moved at least one node
  int levels = 0;
  double modularity = 0.0;
};

/// Multi-level Louvain: local moving in a seeded random order, accepting a
/// move only for strictly positive modularity gain, then aggregation, until a
/// level moves nothing or max_levels is reached. Throws OutOfTime when the
/// deadline passes and std::domain_error for a graph without edge weight.
LouvainResult louvain(const Graph& g, const LouvainOptions& opts);
/// Works on super-nodes, honoring self-loop weights.
LouvainResult louvain(const SuperGraph& sg, const LouvainOptions& opts);

}  // namespace cdkit
