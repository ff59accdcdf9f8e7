#include "cdkit/infer.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

#include "cdkit/components.hpp"
#include "cdkit/timing.hpp"

namespace cdkit {

std::vector<Edge> sample_pairs(const Graph& g, std::size_t n_s, Rng& rng) {
  const std::size_t n = g.node_count();
  std::vector<Edge> pairs = g.edges();
  if (n_s == 0) return pairs;
  if (n < 2) throw std::invalid_argument("pair sampling needs at least two nodes");
  std::uniform_int_distribution<NodeId> first(0, static_cast<NodeId>(n - 1));
  std::uniform_int_distribution<NodeId> other(0, static_cast<NodeId>(n - 2));
  std::vector<Edge> extra;
  extra.reserve(n_s);
  for (std::size_t s = 0; s < n_s; ++s) {
    const NodeId i = first(rng);
    NodeId j = other(rng);
    if (j >= i) ++j;
    const Edge e = canonical(Edge{i, j});
    if (!g.has_edge(e.u, e.v)) extra.push_back(e);
  }
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  pairs.insert(pairs.end(), extra.begin(), extra.end());
  return pairs;
}

AuxGraph build_aux_graph(std::size_t node_count, const PairScoreSet& scored) {
  if (scored.pairs.size() != scored.scores.size()) throw std::invalid_argument("pair and score counts differ");
  AuxGraph aux;
  aux.node_count = node_count;
  for (std::size_t l = 0; l < scored.pairs.size(); ++l) {
    if (scored.scores[l] > 0.5) aux.edges.push_back(scored.pairs[l]);
  }
  return aux;
}

std::vector<double> score_pairs(const Embeddings& emb, std::span<const Edge> pairs, const ModelParams& params,
                                std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, pairs.size() / 4096 + 1));
  if (workers == 1) return score_batch(emb, pairs, params);
  std::vector<double> scores(pairs.size());
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (pairs.size() + workers - 1) / workers;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t lo = std::min(pairs.size(), w * chunk);
          const std::size_t hi = std::min(pairs.size(), lo + chunk);
          const auto part = score_batch(emb, pairs.subspan(lo, hi - lo), params);
          std::copy(part.begin(), part.end(), scores.begin() + static_cast<std::ptrdiff_t>(lo));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return scores;
}

InferResult infer_partition(const Graph& g, const ModelParams& params, const InferOptions& opts) {
  if (g.node_count() < 2) throw std::invalid_argument("inference needs at least two nodes");
  params.validate();
  InferResult r;
  ProjectionSpec spec;
  spec.seed = params.projection_seed;
  spec.dim = params.dims.dim;

  Stopwatch clock;
  const Matrix x = input_features(g, spec, params);
  r.timings.feat = clock.seconds();

  clock.reset();
  Rng rng(opts.seed);
  PairScoreSet scored;
  scored.pairs = sample_pairs(g, opts.n_s, rng);
  const double sampling = clock.seconds();

  clock.reset();
  const Embeddings emb = encode(g, x, params);
  scored.scores = score_pairs(emb, scored.pairs, params, opts.workers);
  r.timings.ffp = clock.seconds();

  clock.reset();
  const AuxGraph aux = build_aux_graph(g.node_count(), scored);
  r.partition = connected_components(aux.node_count, aux.edges);
  r.timings.init = sampling + clock.seconds();
  r.pairs = scored.pairs.size();
  r.aux_edges = aux.edges.size();
  return r;
}

EndToEndResult end_to_end(const Graph& g, const ModelParams& params, const InferOptions& opts,
                          const RefinerChoice& choice) {
  InferResult inferred = infer_partition(g, params, opts);
  RefineResult refined = refine(g, inferred.partition, choice);
  EndToEndResult r;
  r.timings = inferred.timings;
  r.timings.rfn = refined.seconds;
  r.initial = std::move(inferred.partition);
  r.partition = std::move(refined.partition);
  r.initial_modularity = refined.initial_modularity;
  r.modularity = refined.modularity;
  return r;
}

}  // namespace cdkit
