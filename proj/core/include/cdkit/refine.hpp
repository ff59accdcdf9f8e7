#pragma once

#include <string>
#include <string_view>

#include "cdkit/graph.hpp"
#include "cdkit/louvain.hpp"
#include "cdkit/lpa.hpp"
#include "cdkit/partition.hpp"

namespace cdkit {

enum class RefinerKind { None, Lpa, Louvain };

/// "none", "lpa" or "louvain" (case-insensitive); throws std::invalid_argument.
RefinerKind parse_refiner(std::string_view name);
std::string refiner_name(RefinerKind kind);

struct RefinerChoice {
  RefinerKind kind = RefinerKind::Louvain;
  LpaOptions lpa;
  LouvainOptions louvain;
};

struct RefineResult {
  Partition partition;
  double initial_modularity = 0.0;
  double modularity = 0.0;
  /// wall time of the refiner itself, coarsening and lifting included
  double seconds = 0.0;
  /// nodes the refiner operated on: K of the initial partition for Louvain
  std::size_t refined_nodes = 0;
};

/// Louvain: coarsen by `initial`, run Louvain on the super-graph, lift.
/// LPA: label propagation seeded with `initial`. None: `initial` unchanged.
/// Modularities use the Louvain resolution (1 for the other refiners).
RefineResult refine(const Graph& g, const Partition& initial, const RefinerChoice& choice);

/// The refiner run from scratch (singleton start for Louvain, unique labels
/// for LPA); `seconds` is its wall time.
RefineResult refine_from_scratch(const Graph& g, const RefinerChoice& choice);

}  // namespace cdkit
