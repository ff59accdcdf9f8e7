#include "cdkit/lpa.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cdkit/rng.hpp"

namespace cdkit {
namespace {

LpaResult run(const Graph& g, std::vector<Label> labels, std::size_t label_space, const LpaOptions& opts) {
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  const std::size_t n = g.node_count();
  Rng rng(opts.seed);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<double> weight(label_space, 0.0);
  std::vector<std::uint64_t> mark(label_space, 0);
  std::uint64_t stamp = 0;
  std::vector<Label> touched;
  std::vector<Label> best;

  LpaResult result;
  while (result.sweeps < opts.max_iter) {
    if (opts.deadline.expired()) throw OutOfTime("label propagation exceeded its time budget");
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t changes = 0;
    for (const NodeId v : order) {
      const auto nbrs = g.neighbors(v);
      if (nbrs.empty()) continue;
      const auto w = g.neighbor_weights(v);
      touched.clear();
      ++stamp;
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const Label l = labels[nbrs[k]];
        if (mark[l] != stamp) {
          mark[l] = stamp;
          weight[l] = 0.0;
          touched.push_back(l);
        }
        weight[l] += w.empty() ? 1.0 : w[k];
      }
      double top = weight[touched.front()];
      for (Label l : touched) top = std::max(top, weight[l]);
      best.clear();
      bool keep = false;
      for (Label l : touched) {
        if (weight[l] == top) {
          best.push_back(l);
          keep = keep || l == labels[v];
        }
      }
      if (keep) continue;
      Label pick = best.front();
      if (best.size() > 1) {
        std::sort(best.begin(), best.end());
        pick = best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(rng)];
      }
      labels[v] = pick;
      ++changes;
    }
    ++result.sweeps;
    if (changes == 0) {
      result.converged = true;
      break;
    }
  }
  result.partition = Partition::from_labels(labels);
  return result;
}

}  // namespace

LpaResult lpa(const Graph& g, const LpaOptions& opts) {
  std::vector<Label> labels(g.node_count());
  std::iota(labels.begin(), labels.end(), Label{0});
  return run(g, std::move(labels), g.node_count(), opts);
}

LpaResult lpa(const Graph& g, const Partition& init, const LpaOptions& opts) {
  if (init.size() != g.node_count()) throw std::invalid_argument("initial partition does not cover the graph");
  return run(g, {init.labels().begin(), init.labels().end()}, init.community_count(), opts);
}

}  // namespace cdkit
