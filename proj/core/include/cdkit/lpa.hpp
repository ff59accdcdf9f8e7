#pragma once

#include <cstdint>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"
#include "cdkit/timing.hpp"

namespace cdkit {

struct LpaOptions {
  int max_iter = 100;
  std::uint64_t seed = 0;
  Deadline deadline;
};

struct LpaResult {
  Partition partition;
  /// sweeps performed, including the final one without changes
  int sweeps = 0;
  bool converged = false;
};

/// Asynchronous label propagation. Each sweep visits nodes in a fresh random
/// order and assigns the label of largest neighbor weight. A node whose
/// current label is among the maxima keeps it; other ties are broken
/// uniformly at random. Nodes without neighbors keep their label.
/// Stops after a sweep without changes or after max_iter sweeps.
LpaResult lpa(const Graph& g, const LpaOptions& opts);
/// Same, starting from `init` instead of one label per node.
LpaResult lpa(const Graph& g, const Partition& init, const LpaOptions& opts);

}  // namespace cdkit
