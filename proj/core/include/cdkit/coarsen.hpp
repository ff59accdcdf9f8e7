#pragma once

#include <span>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"

namespace cdkit {

/// Merges each community of p into one super-node. Super-node r is community r.
SuperGraph coarsen(const Graph& g, const Partition& p);

/// Coarsens an already-weighted super-graph; node_map of the result maps the
/// nodes of `sg` (not the original graph) to the new super-nodes.
SuperGraph coarsen(const SuperGraph& sg, const Partition& p);

/// Gives every original node the label of its super-node.
Partition lift(const Partition& super_partition, std::span<const NodeId> node_map);

}  // namespace cdkit
