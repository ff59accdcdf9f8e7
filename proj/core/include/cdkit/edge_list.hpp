#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"

namespace cdkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct LoadedGraph {
  Graph graph;
  /// dense node id -> id used in the file (ascending)
  std::vector<std::uint64_t> original_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Reads a whitespace-separated edge list ("u v" per line, '#' comments).
/// Ids are remapped to [0, N) in ascending order of the original id.
LoadedGraph load_edge_list(std::istream& in);
LoadedGraph load_edge_list(const std::filesystem::path& path);

/// Reads an edge list whose ids are already dense in [0, node_count), so
/// isolated nodes survive. Self-loops and duplicates are rejected.
Graph load_dense_edge_list(std::istream& in, std::size_t node_count);
Graph load_dense_edge_list(const std::filesystem::path& path, std::size_t node_count);

/// Writes "u v" lines using original ids when given, dense ids otherwise.
void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::uint64_t> original_ids = {});
void write_edge_list(const std::filesystem::path& path, const Graph& g,
                     std::span<const std::uint64_t> original_ids = {});

/// Partition file: one "node_id community_id" line per node, sorted by node id.
void write_partition(std::ostream& out, const Partition& p, std::span<const std::uint64_t> original_ids = {});
void write_partition(const std::filesystem::path& path, const Partition& p,
                     std::span<const std::uint64_t> original_ids = {});

/// Reads a partition file and maps its node ids through original_ids (dense
/// ids are assumed when original_ids is empty). Every node must appear once.
Partition read_partition(std::istream& in, std::size_t node_count,
                         std::span<const std::uint64_t> original_ids = {});
Partition read_partition(const std::filesystem::path& path, std::size_t node_count,
                         std::span<const std::uint64_t> original_ids = {});

}  // namespace cdkit
