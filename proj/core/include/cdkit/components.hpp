#pragma once

#include <span>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"

namespace cdkit {

/// Connected components by breadth-first search; one community per
/// component, labeled in order of each component's smallest node.
/// Throws std::out_of_range if an endpoint is >= n.
Partition connected_components(std::size_t n, std::span<const Edge> edges);
Partition connected_components(const Graph& g);

}  // namespace cdkit
