#include "cdkit/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace cdkit {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits a line into whitespace-separated tokens; stops at '#'.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j]) && line[j] != '#') ++j;
    tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "expected a non-negative integer node id, got '" + std::string(token) + "'");
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected two node ids, found " + std::to_string(tokens.size()) + " fields");
    }
    raw.emplace_back(parse_id(tokens[0], line_no), parse_id(tokens[1], line_no));
  }
  if (raw.empty()) throw std::runtime_error("edge list is empty");

  LoadedGraph out;
  out.original_ids.reserve(2 * raw.size());
  for (const auto& [a, b] : raw) {
    out.original_ids.push_back(a);
    out.original_ids.push_back(b);
  }
  std::sort(out.original_ids.begin(), out.original_ids.end());
  out.original_ids.erase(std::unique(out.original_ids.begin(), out.original_ids.end()), out.original_ids.end());

  std::unordered_map<std::uint64_t, NodeId> dense;
  dense.reserve(out.original_ids.size());
  for (std::size_t i = 0; i < out.original_ids.size(); ++i) dense.emplace(out.original_ids[i], static_cast<NodeId>(i));

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) {
    if (a == b) {
      ++out.self_loops_dropped;
      continue;
    }
    edges.push_back(canonical(Edge{dense.at(a), dense.at(b)}));
  }
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  out.duplicates_dropped = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());

  out.graph = Graph::from_edges(out.original_ids.size(), edges);
  return out;
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_edge_list(in);
}

Graph load_dense_edge_list(std::istream& in, std::size_t node_count) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(line_no, "expected two node ids");
    const auto u = parse_id(tokens[0], line_no);
    const auto v = parse_id(tokens[1], line_no);
    if (u >= node_count || v >= node_count) throw ParseError(line_no, "node id out of range");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return Graph::from_edges(node_count, edges);
}

Graph load_dense_edge_list(const std::filesystem::path& path, std::size_t node_count) {
  auto in = open_in(path);
  return load_dense_edge_list(in, node_count);
}

void write_edge_list(std::ostream& out, const Graph& g, std::span<const std::uint64_t> original_ids) {
  for (const Edge& e : g.edges()) {
    if (original_ids.empty()) {
      out << e.u << ' ' << e.v << '\n';
    } else {
      out << original_ids[e.u] << ' ' << original_ids[e.v] << '\n';
    }
  }
}

void write_edge_list(const std::filesystem::path& path, const Graph& g, std::span<const std::uint64_t> original_ids) {
  auto out = open_out(path);
  write_edge_list(out, g, original_ids);
}

void write_partition(std::ostream& out, const Partition& p, std::span<const std::uint64_t> original_ids) {
  if (!original_ids.empty() && original_ids.size() != p.size()) {
    throw std::invalid_argument("original id table does not match partition size");
  }
  // original_ids is ascending, so dense order is already sorted by node id
  for (NodeId v = 0; v < p.size(); ++v) {
    const std::uint64_t id = original_ids.empty() ? v : original_ids[v];
    out << id << ' ' << p[v] << '\n';
  }
}

void write_partition(const std::filesystem::path& path, const Partition& p, std::span<const std::uint64_t> original_ids) {
  auto out = open_out(path);
  write_partition(out, p, original_ids);
}

Partition read_partition(std::istream& in, std::size_t node_count, std::span<const std::uint64_t> original_ids) {
  if (!original_ids.empty() && original_ids.size() != node_count) {
    throw std::invalid_argument("original id table does not match node count");
  }
  constexpr Label unset = std::numeric_limits<Label>::max();
  std::vector<Label> labels(node_count, unset);
  std::string line;
  std::size_t line_no = 0;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'node community'");
    const std::uint64_t id = parse_id(tokens[0], line_no);
    const std::uint64_t label = parse_id(tokens[1], line_no);
    std::size_t v = 0;
    if (original_ids.empty()) {
      v = id;
    } else {
      const auto it = std::lower_bound(original_ids.begin(), original_ids.end(), id);
      if (it == original_ids.end() || *it != id) throw ParseError(line_no, "unknown node id " + std::to_string(id));
      v = static_cast<std::size_t>(it - original_ids.begin());
    }
    if (v >= node_count) throw ParseError(line_no, "node id " + std::to_string(id) + " out of range");
    if (labels[v] != unset) throw ParseError(line_no, "node id " + std::to_string(id) + " listed twice");
    if (label >= unset) throw ParseError(line_no, "community id too large");
    labels[v] = static_cast<Label>(label);
    ++seen;
  }
  if (seen != node_count) {
    throw std::runtime_error("partition covers " + std::to_string(seen) + " of " + std::to_string(node_count) + " nodes");
  }
  return Partition::from_labels(labels);
}

Partition read_partition(const std::filesystem::path& path, std::size_t node_count,
                         std::span<const std::uint64_t> original_ids) {
  auto in = open_in(path);
  return read_partition(in, node_count, original_ids);
}

}  // namespace cdkit
