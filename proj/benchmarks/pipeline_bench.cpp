#include <benchmark/benchmark.h>

#include "cdkit/coarsen.hpp"
#include "cdkit/infer.hpp"
#include "cdkit/louvain.hpp"
#include "cdkit/lpa.hpp"
#include "cdkit/model.hpp"
#include "cdkit/modularity.hpp"
#include "cdkit/synthgen.hpp"

namespace {

using namespace cdkit;

// Block-model graph with about N / 20 communities.
const GeneratedGraph& block_graph(std::size_t n) {
  static std::vector<std::pair<std::size_t, GeneratedGraph>> cache;
  for (const auto& [size, g] : cache) {
    if (size == n) return g;
  }
  GenParams p;
  p.nodes = n;
  p.communities = n / 20;
  p.deg_min = 2;
  p.deg_max = 20;
  p.gamma = 2.5;
  p.mu = 3.0;
  p.rho = 2.0;
  Rng rng(n);
  cache.emplace_back(n, generate_dcsbm(p, rng));
  return cache.back().second;
}

ModelParams model(int dim) {
  ModelDims dims;
  dims.dim = dim;
  return ModelParams::initialize(dims, {}, 1);
}

void BM_Modularity(benchmark::State& state) {
  const auto& g = block_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(modularity(g.graph, g.truth));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.graph.edge_count()));
}
BENCHMARK(BM_Modularity)->Arg(1000)->Arg(4000);

void BM_Coarsen(benchmark::State& state) {
  const auto& g = block_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coarsen(g.graph, g.truth));
}
BENCHMARK(BM_Coarsen)->Arg(1000)->Arg(4000);

void BM_LouvainFromScratch(benchmark::State& state) {
  const auto& g = block_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(louvain(g.graph, {}));
}
BENCHMARK(BM_LouvainFromScratch)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_LouvainOnTruthSuperGraph(benchmark::State& state) {
  const auto& g = block_graph(static_cast<std::size_t>(state.range(0)));
  const SuperGraph sg = coarsen(g.graph, g.truth);
  for (auto _ : state) benchmark::DoNotOptimize(louvain(sg, {}));
}
BENCHMARK(BM_LouvainOnTruthSuperGraph)->Arg(1000)->Arg(4000);

void BM_Lpa(benchmark::State& state) {
  const auto& g = block_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lpa(g.graph, {}));
}
BENCHMARK(BM_Lpa)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto& g = block_graph(4000);
  const auto q = reduced_modularity_features(g.graph);
  const ModelParams p = model(static_cast<int>(state.range(0)));
  const ProjectionSpec spec{.seed = 2, .dim = p.dims.dim};
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(q, spec, p));
}
BENCHMARK(BM_ExtractFeatures)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
  const auto& g = block_graph(4000);
  const ModelParams p = model(static_cast<int>(state.range(0)));
  const Matrix x = input_features(g.graph, {.seed = 2, .dim = p.dims.dim}, p);
  for (auto _ : state) benchmark::DoNotOptimize(encode(g.graph, x, p));
}
BENCHMARK(BM_Encode)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ScorePairs(benchmark::State& state) {
  const auto& g = block_graph(4000);
  const ModelParams p = model(64);
  const Embeddings emb = encode(g.graph, input_features(g.graph, {.seed = 2, .dim = 64}, p), p);
  Rng rng(3);
  const auto pairs = sample_pairs(g.graph, 10000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(score_batch(emb, pairs, p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs.size()));
}
BENCHMARK(BM_ScorePairs)->Unit(benchmark::kMillisecond);

void BM_InferPartition(benchmark::State& state) {
  const auto& g = block_graph(static_cast<std::size_t>(state.range(0)));
  const ModelParams p = model(32);
  for (auto _ : state) benchmark::DoNotOptimize(infer_partition(g.graph, p, {}));
}
BENCHMARK(BM_InferPartition)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
