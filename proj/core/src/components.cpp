#include "cdkit/components.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdkit {
namespace {

constexpr Label kUnvisited = std::numeric_limits<Label>::max();

Partition label_by_bfs(std::size_t n, std::span<const std::size_t> offsets, std::span<const NodeId> adjacency) {
  std::vector<Label> labels(n, kUnvisited);
  std::vector<NodeId> queue;
  queue.reserve(n);
  Label next = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (labels[root] != kUnvisited) continue;
    labels[root] = next;
    queue.clear();
    queue.push_back(root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) {
        const NodeId w = adjacency[k];
        if (labels[w] == kUnvisited) {
          labels[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return Partition(std::move(labels));
}

}  // namespace

Partition connected_components(std::size_t n, std::span<const Edge> edges) {
  // multi-edges and self-loops are harmless here, so build a raw CSR
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw std::out_of_range("edge endpoint out of range for " + std::to_string(n) + " nodes");
    }
    ++offsets[e.u + 1];
    ++offsets[e.v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<NodeId> adjacency(2 * edges.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : edges) {
    adjacency[cursor[e.u]++] = e.v;
    adjacency[cursor[e.v]++] = e.u;
  }
  return label_by_bfs(n, offsets, adjacency);
}

Partition connected_components(const Graph& g) {
  return label_by_bfs(g.node_count(), g.offsets(), g.adjacency());
}

}  // namespace cdkit
