#include "cdkit/refine.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "cdkit/coarsen.hpp"
#include "cdkit/modularity.hpp"
#include "cdkit/timing.hpp"

namespace cdkit {
namespace {

double resolution_of(const RefinerChoice& choice) {
  return choice.kind == RefinerKind::Louvain ? choice.louvain.resolution : 1.0;
}

}  // namespace

RefinerKind parse_refiner(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "none") return RefinerKind::None;
  if (lower == "lpa") return RefinerKind::Lpa;
  if (lower == "louvain") return RefinerKind::Louvain;
  throw std::invalid_argument("unknown refiner '" + std::string(name) + "' (expected none, lpa or louvain)");
}

std::string refiner_name(RefinerKind kind) {
  switch (kind) {
    case RefinerKind::None:
      return "none";
    case RefinerKind::Lpa:
      return "lpa";
    case RefinerKind::Louvain:
      return "louvain";
  }
  return "unknown";
}

RefineResult refine(const Graph& g, const Partition& initial, const RefinerChoice& choice) {
  if (initial.size() != g.node_count()) throw std::invalid_argument("initial partition does not cover the graph");
  const double res = resolution_of(choice);
  RefineResult r;
  r.initial_modularity = modularity(g, initial, res);
  Stopwatch clock;
  switch (choice.kind) {
    case RefinerKind::None:
      r.partition = initial;
      r.refined_nodes = 0;
      break;
    case RefinerKind::Lpa:
      r.partition = lpa(g, initial, choice.lpa).partition;
      r.refined_nodes = g.node_count();
      break;
    case RefinerKind::Louvain: {
      const SuperGraph sg = coarsen(g, initial);
      r.refined_nodes = sg.node_count();
      const LouvainResult lr = louvain(sg, choice.louvain);
      r.partition = lift(lr.partition, sg.node_map);
      break;
    }
  }
  r.seconds = clock.seconds();
  r.modularity = modularity(g, r.partition, res);
  return r;
}

RefineResult refine_from_scratch(const Graph& g, const RefinerChoice& choice) {
  RefineResult r;
  r.initial_modularity = modularity(g, Partition::singletons(g.node_count()), resolution_of(choice));
  Stopwatch clock;
  switch (choice.kind) {
    case RefinerKind::None:
      r.partition = Partition::singletons(g.node_count());
      break;
    case RefinerKind::Lpa:
      r.partition = lpa(g, choice.lpa).partition;
      break;
    case RefinerKind::Louvain:
      r.partition = louvain(g, choice.louvain).partition;
      break;
  }
  r.seconds = clock.seconds();
  r.refined_nodes = choice.kind == RefinerKind::None ? 0 : g.node_count();
  r.modularity = modularity(g, r.partition, resolution_of(choice));
  return r;
}

}  // namespace cdkit
