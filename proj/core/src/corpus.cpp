#include "cdkit/corpus.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <ostream>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cdkit/edge_list.hpp"
#include "cdkit/format.hpp"

namespace cdkit {

const char* const kManifestHeader =
    "graph_id,seed,nodes,communities,deg_min,deg_max,gamma,mu,rho,actual_communities,edges,edge_file,truth_file";

namespace {

std::string file_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "graph_%05zu", index);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

CorpusEntry generate_corpus_entry(const GenConfig& cfg, std::uint64_t master_seed, std::size_t index) {
  CorpusEntry e;
  e.index = index;
  e.seed = derive_seed(master_seed, index);
  Rng rng(e.seed);
  e.params = sample_params(cfg, rng);
  auto generated = generate_dcsbm(e.params, rng);
  e.graph = std::move(generated.graph);
  e.truth = std::move(generated.truth);
  return e;
}

std::vector<CorpusEntry> generate_corpus(const GenConfig& cfg, std::uint64_t master_seed, std::size_t workers) {
  cfg.validate();
  std::vector<CorpusEntry> entries(cfg.graph_count);
  workers = std::max<std::size_t>(1, std::min(workers, cfg.graph_count));
  if (workers == 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = generate_corpus_entry(cfg, master_seed, i);
    return entries;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < entries.size(); i += workers) {
          entries[i] = generate_corpus_entry(cfg, master_seed, i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return entries;
}

void write_corpus(const std::filesystem::path& dir, std::span<const CorpusEntry> entries) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw std::runtime_error("cannot write " + (dir / "manifest.csv").string());
  manifest << kManifestHeader << '\n';
  for (const auto& e : entries) {
    const std::string stem = file_stem(e.index);
    write_edge_list(dir / (stem + ".edges"), e.graph);
    write_partition(dir / (stem + ".truth"), e.truth);
    const auto& p = e.params;
    manifest << e.index << ',' << e.seed << ',' << p.nodes << ',' << p.communities << ',' << p.deg_min << ','
             << p.deg_max << ',' << format_double(p.gamma) << ',' << format_double(p.mu) << ','
             << format_double(p.rho) << ',' << e.truth.community_count() << ',' << e.graph.edge_count() << ','
             << stem << ".edges," << stem << ".truth\n";
  }
}

std::vector<CorpusEntry> read_corpus(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.csv");
  if (!manifest) throw std::runtime_error("no manifest.csv in " + dir.string());
  std::string line;
  if (!std::getline(manifest, line) || line != kManifestHeader) {
    throw std::runtime_error("unexpected manifest header in " + dir.string());
  }
  std::vector<CorpusEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 13) throw std::runtime_error("manifest line " + std::to_string(line_no) + ": expected 13 fields");
    CorpusEntry e;
    e.index = std::stoull(f[0]);
    e.seed = std::stoull(f[1]);
    e.params.nodes = std::stoull(f[2]);
    e.params.communities = std::stoull(f[3]);
    e.params.deg_min = static_cast<std::uint32_t>(std::stoul(f[4]));
    e.params.deg_max = static_cast<std::uint32_t>(std::stoul(f[5]));
    e.params.gamma = parse_double(f[6]);
    e.params.mu = parse_double(f[7]);
    e.params.rho = parse_double(f[8]);
    e.graph = load_dense_edge_list(dir / f[11], e.params.nodes);
    e.truth = read_partition(dir / f[12], e.params.nodes);
    if (e.truth.community_count() != std::stoull(f[9]) || e.graph.edge_count() != std::stoull(f[10])) {
      throw std::runtime_error("manifest line " + std::to_string(line_no) + " disagrees with graph files");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

CorpusStats corpus_stats(std::span<const CorpusEntry> entries) {
  CorpusStats s;
  s.graphs = entries.size();
  if (entries.empty()) return s;
  s.min_nodes = s.min_edges = s.min_communities = std::numeric_limits<std::size_t>::max();
  s.min_density = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) {
    const std::size_t n = e.graph.node_count();
    const std::size_t m = e.graph.edge_count();
    const std::size_t k = e.truth.community_count();
    const auto degs = e.graph.degrees();
    const double density = n > 1 ? 2.0 * static_cast<double>(m) / (static_cast<double>(n) * (n - 1)) : 0.0;
    s.min_nodes = std::min(s.min_nodes, n);
    s.max_nodes = std::max(s.max_nodes, n);
    s.avg_nodes += n;
    s.min_edges = std::min(s.min_edges, m);
    s.max_edges = std::max(s.max_edges, m);
    s.avg_edges += m;
    s.min_communities = std::min(s.min_communities, k);
    s.max_communities = std::max(s.max_communities, k);
    s.avg_communities += k;
    s.avg_min_degree += *std::min_element(degs.begin(), degs.end());
    s.avg_max_degree += *std::max_element(degs.begin(), degs.end());
    s.min_density = std::min(s.min_density, density);
    s.max_density = std::max(s.max_density, density);
    s.avg_density += density;
  }
  const double t = static_cast<double>(entries.size());
  s.avg_nodes /= t;
  s.avg_edges /= t;
  s.avg_communities /= t;
  s.avg_min_degree /= t;
  s.avg_max_degree /= t;
  s.avg_density /= t;
  return s;
}

void print_corpus_stats(std::ostream& out, const CorpusStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "graphs %zu\n"
                "N     min %zu  max %zu  avg %.1f\n"
                "E     min %zu  max %zu  avg %.1f\n"
                "K     min %zu  max %zu  avg %.1f\n"
                "deg   avg min %.1f  avg max %.1f\n"
                "dens  min %.1e  max %.1e  avg %.1e\n",
                s.graphs, s.min_nodes, s.max_nodes, s.avg_nodes, s.min_edges, s.max_edges, s.avg_edges,
                s.min_communities, s.max_communities, s.avg_communities, s.avg_min_degree, s.avg_max_degree,
                s.min_density, s.max_density, s.avg_density);
  out << buf;
}

}  // namespace cdkit
