#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "cdkit/coarsen.hpp"
#include "cdkit/louvain.hpp"
#include "cdkit/lpa.hpp"
#include "cdkit/modularity.hpp"
#include "cdkit/refine.hpp"
#include "cdkit/synthgen.hpp"
#include "oracles.hpp"

namespace cdkit {
namespace {

// `count` cliques of size `size`; clique c is joined to clique c + 1 (mod
// count) by one edge when `ring` is set.
Graph cliques(std::size_t count, std::size_t size, bool ring) {
  std::vector<Edge> e;
  for (std::size_t c = 0; c < count; ++c) {
    const auto base = static_cast<NodeId>(c * size);
    for (NodeId i = 0; i < size; ++i) {
      for (NodeId j = i + 1; j < size; ++j) e.push_back({base + i, base + j});
    }
    if (ring && count > 1) {
      const auto next = static_cast<NodeId>(((c + 1) % count) * size);
      e.push_back({base, next + 1});
    }
  }
  return Graph::from_edges(count * size, e);
}

Partition block_labels(std::size_t count, std::size_t size) {
  std::vector<Label> l(count * size);
  for (std::size_t v = 0; v < l.size(); ++v) l[v] = static_cast<Label>(v / size);
  return Partition(l);
}

TEST(Lpa, EdgelessGraphKeepsSingletons) {
  const Graph g = Graph::from_edges(6, std::vector<Edge>{});
  const LpaResult r = lpa(g, {});
  EXPECT_EQ(r.partition, Partition::singletons(6));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.sweeps, 1);
}

TEST(Lpa, SeparatesTwoCliques) {
  const Graph g = cliques(2, 5, false);
  const Partition truth = block_labels(2, 5);
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LpaOptions o;
    o.seed = seed;
    const LpaResult r = lpa(g, o);
    EXPECT_TRUE(r.converged);
    exact += same_grouping(r.partition, truth);
  }
  EXPECT_GE(exact, 18);
}

TEST(Lpa, GroundTruthIsFixedPoint) {
  const Graph g = cliques(4, 6, true);
  const Partition truth = block_labels(4, 6);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    LpaOptions o;
    o.seed = seed;
    const LpaResult r = lpa(g, truth, o);
    EXPECT_EQ(r.sweeps, 1);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.partition, truth);
  }
}

TEST(Lpa, MovesMisplacedNodeToItsMajority) {
  // node 5 sits in a triangle's community but has three neighbors in the
  // other triangle and one in its own
  const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 6}, {3, 6}, {5, 3}, {5, 4}, {5, 6}, {5, 0}};
  const Graph g = Graph::from_edges(7, e);
  const Partition init(std::vector<Label>{0, 0, 0, 1, 1, 0, 1});
  const LpaResult r = lpa(g, init, {});
  EXPECT_EQ(r.partition[5], r.partition[3]);
  EXPECT_NE(r.partition[5], r.partition[0]);
  EXPECT_EQ(r.partition.community_count(), 2u);
}

TEST(Lpa, HonorsIterationCapAndDeadline) {
  Rng rng(1);
  const Graph g = testing::random_graph(300, 0.02, rng);
  LpaOptions o;
  o.max_iter = 1;
  const LpaResult r = lpa(g, o);
  EXPECT_EQ(r.sweeps, 1);
  EXPECT_FALSE(r.converged);
  o.max_iter = 100;
  o.deadline = Deadline::after(1e-9);
  EXPECT_THROW(lpa(g, o), OutOfTime);
  EXPECT_THROW(lpa(g, Partition::singletons(3), {}), std::invalid_argument);
}

TEST(Lpa, DeterministicPerSeed) {
  Rng rng(2);
  const Graph g = testing::random_graph(200, 0.03, rng);
  LpaOptions o;
  o.seed = 9;
  EXPECT_EQ(lpa(g, o).partition, lpa(g, o).partition);
}

TEST(Louvain, TwoTrianglesReachHalf) {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  const Graph g = Graph::from_edges(6, e);
  const LouvainResult r = louvain(g, {});
  EXPECT_TRUE(same_grouping(r.partition, block_labels(2, 3)));
  // 2 (3/7 - (7/14)^2) = 5/14
  EXPECT_NEAR(r.modularity, 5.0 / 14.0, 1e-12);
  const Graph split = cliques(2, 3, false);
  EXPECT_NEAR(louvain(split, {}).modularity, 0.5, 1e-12);
}

TEST(Louvain, SingleEdgeMerges) {
  const Graph g = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
  const LouvainResult r = louvain(g, {});
  EXPECT_EQ(r.partition.community_count(), 1u);
  EXPECT_NEAR(r.modularity, 0.0, 1e-15);
}

TEST(Louvain, RingOfCliques) {
  const Graph g = cliques(4, 5, true);
  const Partition truth = block_labels(4, 5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    LouvainOptions o;
    o.seed = seed;
    const LouvainResult r = louvain(g, o);
    EXPECT_TRUE(same_grouping(r.partition, truth)) << "seed " << seed;
    EXPECT_NEAR(r.modularity, modularity(g, r.partition), 1e-12);
    // 4 (10/44 - (22/88)^2)
    EXPECT_NEAR(r.modularity, 4.0 * (10.0 / 44.0 - 0.0625), 1e-12);
  }
}

TEST(Louvain, ReportedModularityMatchesRecomputation) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Graph g = testing::random_graph(60, 0.08, rng);
    if (g.edge_count() == 0) continue;
    LouvainOptions o;
    o.seed = static_cast<std::uint64_t>(t);
    o.resolution = t % 2 ? 1.0 : 0.7;
    const LouvainResult r = louvain(g, o);
    EXPECT_NEAR(r.modularity, modularity(g, r.partition, o.resolution), 1e-12);
    EXPECT_GE(r.modularity, modularity(g, Partition::singletons(60), o.resolution) - 1e-12);
  }
}

TEST(Louvain, SuperGraphModularityLiftsExactly) {
  Rng rng(4);
  const Graph g = testing::random_graph(80, 0.06, rng);
  const Partition init = testing::random_partition(80, 20, rng);
  const SuperGraph sg = coarsen(g, init);
  const LouvainResult r = louvain(sg, {});
  EXPECT_EQ(r.partition.size(), sg.node_count());
  EXPECT_NEAR(r.modularity, modularity(g, lift(r.partition, sg.node_map)), 1e-12);
  EXPECT_NEAR(r.modularity, modularity(sg, r.partition), 1e-12);
}

TEST(Louvain, ErrorsAndDeadline) {
  EXPECT_THROW(louvain(Graph::from_edges(3, std::vector<Edge>{}), {}), std::domain_error);
  Rng rng(5);
  const Graph g = testing::random_graph(300, 0.05, rng);
  LouvainOptions o;
  o.deadline = Deadline::after(1e-9);
  EXPECT_THROW(louvain(g, o), OutOfTime);
}

TEST(Refine, ParseNames) {
  EXPECT_EQ(parse_refiner("LPA"), RefinerKind::Lpa);
  EXPECT_EQ(parse_refiner("louvain"), RefinerKind::Louvain);
  EXPECT_EQ(parse_refiner("None"), RefinerKind::None);
  EXPECT_THROW(parse_refiner("infomap"), std::invalid_argument);
  for (auto k : {RefinerKind::None, RefinerKind::Lpa, RefinerKind::Louvain}) {
    EXPECT_EQ(parse_refiner(refiner_name(k)), k);
  }
}

TEST(Refine, SingletonInitEqualsScratchLouvain) {
  Rng rng(6);
  const Graph g = testing::random_graph(120, 0.05, rng);
  RefinerChoice c;
  c.kind = RefinerKind::Louvain;
  c.louvain.seed = 4;
  const RefineResult a = refine(g, Partition::singletons(120), c);
  const RefineResult b = refine_from_scratch(g, c);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.modularity, b.modularity);
  EXPECT_EQ(a.refined_nodes, 120u);
  EXPECT_GE(a.seconds, 0.0);
}

TEST(Refine, NoneKeepsInitial) {
  Rng rng(7);
  const Graph g = testing::random_graph(30, 0.2, rng);
  const Partition init = testing::random_partition(30, 3, rng);
  RefinerChoice c;
  c.kind = RefinerKind::None;
  const RefineResult r = refine(g, init, c);
  EXPECT_EQ(r.partition, init);
  EXPECT_EQ(r.modularity, r.initial_modularity);
  EXPECT_NEAR(r.modularity, modularity(g, init), 1e-15);
}

TEST(Refine, LouvainNeverLowersModularityOnBlockGraphs) {
  Rng rng(8);
  GenParams p;
  p.nodes = 400;
  p.communities = 8;
  p.deg_min = 3;
  p.deg_max = 40;
  p.gamma = 2.5;
  p.mu = 3.0;
  p.rho = 2.0;
  RefinerChoice c;
  c.kind = RefinerKind::Louvain;
  for (int t = 0; t < 5; ++t) {
    const GeneratedGraph gen = generate_dcsbm(p, rng);
    for (const Partition& init : {gen.truth, testing::random_partition(400, 30, rng)}) {
      const RefineResult r = refine(gen.graph, init, c);
      EXPECT_GE(r.modularity, r.initial_modularity - 1e-12);
      EXPECT_EQ(r.refined_nodes, init.community_count());
      EXPECT_NEAR(r.modularity, modularity(gen.graph, r.partition), 1e-12);
      // refinement only merges whole initial communities
      for (NodeId v = 0; v < 400; ++v) {
        for (NodeId u : gen.graph.neighbors(v)) {
          if (init[u] == init[v]) EXPECT_EQ(r.partition[u], r.partition[v]);
        }
      }
    }
  }
}

TEST(Refine, LpaFromInitImprovesOnRandomStart) {
  Rng rng(9);
  const Graph g = cliques(6, 6, true);
  RefinerChoice c;
  c.kind = RefinerKind::Lpa;
  const RefineResult r = refine(g, block_labels(6, 6), c);
  EXPECT_EQ(r.partition, block_labels(6, 6));
  const RefineResult s = refine_from_scratch(g, c);
  EXPECT_LE(s.modularity, r.modularity + 1e-12);
}

}  // namespace
}  // namespace cdkit
