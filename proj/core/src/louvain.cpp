#include "cdkit/louvain.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "cdkit/coarsen.hpp"
#include "cdkit/modularity.hpp"
#include "cdkit/rng.hpp"

namespace cdkit {
namespace {

// Moves below this fraction of the total weight count as no gain, which
// keeps rounding noise from cycling nodes between equivalent communities.
constexpr double kGainTolerance = 1e-12;

// One local-moving phase on (g, self loops); returns community per node and
// whether anything moved.
bool local_moving(const Graph& g, std::span<const double> self_loops, double resolution, Rng& rng,
                  const Deadline& deadline, std::vector<Label>& community) {
  const std::size_t n = g.node_count();
  std::vector<double> k(n);
  double two_m = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    k[v] = g.strength(v) + (self_loops.empty() ? 0.0 : self_loops[v]);
    two_m += k[v];
  }
  community.resize(n);
  std::iota(community.begin(), community.end(), Label{0});
  std::vector<double> tot(k);
  std::vector<double> link(n, 0.0);
  std::vector<std::uint64_t> mark(n, 0);
  std::uint64_t stamp = 0;
  std::vector<Label> touched;
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::shuffle(order.begin(), order.end(), rng);

  const double tol = kGainTolerance * two_m;
  bool moved_any = false;
  for (bool moved = true; moved;) {
    if (deadline.expired()) throw OutOfTime("Louvain exceeded its time budget");
    moved = false;
    for (const NodeId v : order) {
      const Label cur = community[v];
      const auto nbrs = g.neighbors(v);
      const auto w = g.neighbor_weights(v);
      ++stamp;
      touched.clear();
      mark[cur] = stamp;
      link[cur] = 0.0;
      touched.push_back(cur);
      for (std::size_t e = 0; e < nbrs.size(); ++e) {
        const Label c = community[nbrs[e]];
        if (mark[c] != stamp) {
          mark[c] = stamp;
          link[c] = 0.0;
          touched.push_back(c);
        }
        link[c] += w.empty() ? 1.0 : w[e];
      }
      tot[cur] -= k[v];
      // gain of joining c, up to a common factor: link_c - res * tot_c k_v / 2m
      const double scale = resolution * k[v] / two_m;
      Label best = cur;
      double best_gain = link[cur] - scale * tot[cur];
      for (const Label c : touched) {
        const double gain = link[c] - scale * tot[c];
        if (gain > best_gain + tol) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += k[v];
      if (best != cur) {
        community[v] = best;
        moved = true;
        moved_any = true;
      }
    }
  }
  return moved_any;
}

// `sg` is the input as a super-graph when self_loops came from one.
LouvainResult run(const Graph& g, std::span<const double> self_loops, const SuperGraph* sg, const LouvainOptions& opts) {
  if (opts.max_levels < 1) throw std::invalid_argument("max_levels must be at least 1");
  if (!(opts.resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  double mass = g.total_weight();
  for (double s : self_loops) mass += s / 2.0;
  if (mass <= 0.0) throw std::domain_error("Louvain needs positive total edge weight");

  Rng rng(opts.seed);
  LouvainResult result;
  std::vector<Label> membership(g.node_count());
  std::iota(membership.begin(), membership.end(), Label{0});

  SuperGraph level;
  const Graph* cur_graph = &g;
  std::span<const double> cur_loops = self_loops;
  std::vector<Label> community;
  for (int l = 0; l < opts.max_levels; ++l) {
    if (!local_moving(*cur_graph, cur_loops, opts.resolution, rng, opts.deadline, community)) break;
    ++result.levels;
    const Partition moved = Partition::from_labels(community);
    for (Label& m : membership) m = moved[m];
    if (moved.community_count() == cur_graph->node_count()) break;
    if (cur_graph == &level.graph) {
      SuperGraph next = coarsen(level, moved);
      level = std::move(next);
    } else {
      level = sg ? coarsen(*sg, moved) : coarsen(g, moved);
    }
    cur_graph = &level.graph;
    cur_loops = level.self_loop_weight;
  }
  result.partition = Partition::from_labels(membership);
  return result;
}

}  // namespace

LouvainResult louvain(const Graph& g, const LouvainOptions& opts) {
  LouvainResult r = run(g, {}, nullptr, opts);
  r.modularity = modularity(g, r.partition, opts.resolution);
  return r;
}

LouvainResult louvain(const SuperGraph& sg, const LouvainOptions& opts) {
  if (sg.self_loop_weight.size() != sg.node_count()) throw std::invalid_argument("super-graph self-loop table has the wrong size");
  LouvainResult r = run(sg.graph, sg.self_loop_weight, &sg, opts);
  r.modularity = modularity(sg, r.partition, opts.resolution);
  return r;
}

}  // namespace cdkit
