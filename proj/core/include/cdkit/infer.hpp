#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdkit/graph.hpp"
#include "cdkit/model.hpp"
#include "cdkit/partition.hpp"
#include "cdkit/refine.hpp"
#include "cdkit/rng.hpp"

namespace cdkit {

/// Every edge of g (canonical, ascending) followed by the distinct new pairs
/// among n_s uniform draws of i != j, canonical and ascending.
std::vector<Edge> sample_pairs(const Graph& g, std::size_t n_s, Rng& rng);

struct PairScoreSet {
  std::vector<Edge> pairs;
  std::vector<double> scores;
};

struct AuxGraph {
  std::size_t node_count = 0;
  /// pairs scored strictly above 0.5
  std::vector<Edge> edges;
};

AuxGraph build_aux_graph(std::size_t node_count, const PairScoreSet& scored);

/// Seconds per phase: features, forward pass (embedding and pair scoring),
/// initial partition (sampling, auxiliary graph, components), refinement.
struct PhaseTimings {
  double feat = 0.0;
  double ffp = 0.0;
  double init = 0.0;
  double rfn = 0.0;

  double generalization() const noexcept { return feat + ffp + init; }
  double total() const noexcept { return feat + ffp + init + rfn; }
};

struct InferOptions {
  std::size_t n_s = 10000;
  std::uint64_t seed = 0;
  /// scoring threads; the output does not depend on it
  std::size_t workers = 1;
};

struct InferResult {
  Partition partition;
  PhaseTimings timings;
  std::size_t pairs = 0;
  std::size_t aux_edges = 0;
};

/// One forward pass of the model, then communities = connected components
/// of the auxiliary graph. Throws std::invalid_argument when the graph has
/// fewer than two nodes.
InferResult infer_partition(const Graph& g, const ModelParams& params, const InferOptions& opts);

/// score_batch split into contiguous chunks across `workers` threads.
std::vector<double> score_pairs(const Embeddings& emb, std::span<const Edge> pairs, const ModelParams& params,
                                std::size_t workers);

struct EndToEndResult {
  Partition initial;
  Partition partition;
  PhaseTimings timings;
  double initial_modularity = 0.0;
  double modularity = 0.0;
};

EndToEndResult end_to_end(const Graph& g, const ModelParams& params, const InferOptions& opts,
                          const RefinerChoice& choice);

}  // namespace cdkit
