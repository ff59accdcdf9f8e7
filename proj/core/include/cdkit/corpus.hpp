#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"
#include "cdkit/synthgen.hpp"

namespace cdkit {

struct CorpusEntry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  GenParams params;
  Graph graph;
  Partition truth;
};

/// Graph `index` of a corpus: its own engine is seeded with
/// derive_seed(master_seed, index), then parameters and topology are drawn.
CorpusEntry generate_corpus_entry(const GenConfig& cfg, std::uint64_t master_seed, std::size_t index);

/// cfg.graph_count entries; the result does not depend on `workers`.
std::vector<CorpusEntry> generate_corpus(const GenConfig& cfg, std::uint64_t master_seed, std::size_t workers = 1);

/// Directory layout: manifest.csv plus graph_NNNNN.edges / graph_NNNNN.truth.
void write_corpus(const std::filesystem::path& dir, std::span<const CorpusEntry> entries);
std::vector<CorpusEntry> read_corpus(const std::filesystem::path& dir);

extern const char* const kManifestHeader;

struct CorpusStats {
  std::size_t graphs = 0;
  std::size_t min_nodes = 0, max_nodes = 0;
  double avg_nodes = 0.0;
  std::size_t min_edges = 0, max_edges = 0;
  double avg_edges = 0.0;
  std::size_t min_communities = 0, max_communities = 0;
  double avg_communities = 0.0;
  /// per-graph realized min / max degree, averaged
  double avg_min_degree = 0.0;
  double avg_max_degree = 0.0;
  double min_density = 0.0, max_density = 0.0, avg_density = 0.0;
};

CorpusStats corpus_stats(std::span<const CorpusEntry> entries);
void print_corpus_stats(std::ostream& out, const CorpusStats& stats);

}  // namespace cdkit
