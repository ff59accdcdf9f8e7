#include "cdkit/synthgen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdkit {
namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

double draw_real(const RealRange& r, Rng& rng) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

std::int64_t draw_int(const IntRange& r, Rng& rng) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_int_distribution<std::int64_t>(r.lo, r.hi)(rng);
}

void check_positive(const RealRange& r, const char* name) {
  if (!(r.lo > 0.0) || !(r.hi >= r.lo)) {
    throw std::invalid_argument(std::string("invalid range for ") + name);
  }
}

}  // namespace

void GenConfig::validate() const {
  if (nodes.lo < 2 || nodes.hi < nodes.lo) throw std::invalid_argument("invalid node range");
  if (communities.lo < 1 || communities.hi < communities.lo) throw std::invalid_argument("invalid community range");
  if (communities.hi > nodes.lo) throw std::invalid_argument("community range may exceed the node count");
  check_positive(gamma, "gamma");
  check_positive(mu, "mu");
  check_positive(rho, "rho");
  if (deg_min_cap < 1 || deg_max_cap < 1 || deg_min_divisor < 1) {
    throw std::invalid_argument("degree caps must be positive");
  }
  if (graph_count < 1) throw std::invalid_argument("graph count must be positive");
}

void GenParams::validate() const {
  if (communities < 1) throw std::invalid_argument("need at least one community");
  if (communities > nodes) {
    throw std::invalid_argument("communities (" + std::to_string(communities) + ") exceed nodes (" +
                                std::to_string(nodes) + ")");
  }
  if (deg_min < 1 || deg_min > deg_max || deg_max > nodes) throw std::invalid_argument("invalid degree bounds");
  if (!(gamma > 0.0) || !(mu > 0.0) || !(rho > 0.0)) throw std::invalid_argument("gamma, mu, rho must be positive");
}

std::uint32_t degree_floor(const GenConfig& cfg, std::size_t nodes, std::size_t communities) {
  const auto v = ceil_div(nodes, static_cast<std::uint64_t>(cfg.deg_min_divisor) * communities);
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(cfg.deg_min_cap, v));
}

std::uint32_t degree_ceiling(const GenConfig& cfg, std::size_t nodes, std::size_t communities) {
  const auto v = ceil_div(nodes, communities);
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(cfg.deg_max_cap, v));
}

GenParams sample_params(const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  GenParams p;
  p.nodes = static_cast<std::size_t>(draw_int(cfg.nodes, rng));
  p.communities = static_cast<std::size_t>(draw_int(cfg.communities, rng));
  p.deg_min = degree_floor(cfg, p.nodes, p.communities);
  p.deg_max = degree_ceiling(cfg, p.nodes, p.communities);
  p.gamma = draw_real(cfg.gamma, rng);
  p.mu = draw_real(cfg.mu, rng);
  p.rho = draw_real(cfg.rho, rng);
  return p;
}

BlockModel build_block_model(std::span<const Label> labels, std::span<const std::uint32_t> target_degrees,
                             std::size_t communities, double mu) {
  BlockModel m;
  m.communities = communities;
  m.phi.assign(communities, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    m.phi[labels[i]] += target_degrees[i];
    m.phi_total += target_degrees[i];
  }
  m.theta.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) m.theta[i] = target_degrees[i] / m.phi[labels[i]];

  m.omega.assign(communities * communities, 0.0);
  const double within = mu / (1.0 + mu);
  const double between = 1.0 / (1.0 + mu);
  for (std::size_t r = 0; r < communities; ++r) {
    m.omega[r * communities + r] = within * m.phi[r];
    for (std::size_t t = r + 1; t < communities; ++t) {
      const double w = between * m.phi[r] * m.phi[t] / m.phi_total;
      m.omega[r * communities + t] = w;
      m.omega[t * communities + r] = w;
    }
  }
  return m;
}

GeneratedGraph generate_dcsbm(const GenParams& params, Rng& rng) {
  params.validate();
  const std::size_t n = params.nodes;
  const std::size_t k = params.communities;

  // community proportions ~ symmetric Dirichlet(10 / rho)
  std::gamma_distribution<double> gamma_draw(10.0 / params.rho, 1.0);
  std::vector<double> proportions(k);
  double sum = 0.0;
  for (auto& x : proportions) {
    x = gamma_draw(rng);
    sum += x;
  }
  if (!(sum > 0.0)) std::fill(proportions.begin(), proportions.end(), 1.0);

  std::discrete_distribution<std::size_t> community_draw(proportions.begin(), proportions.end());
  std::vector<double> degree_weights;
  for (std::uint32_t deg = params.deg_min; deg <= params.deg_max; ++deg) {
    degree_weights.push_back(std::pow(static_cast<double>(deg), params.gamma));
  }
  std::discrete_distribution<std::uint32_t> degree_draw(degree_weights.begin(), degree_weights.end());

  std::vector<Label> raw_labels(n);
  std::vector<std::uint32_t> degrees(n);
  for (std::size_t i = 0; i < n; ++i) {
    raw_labels[i] = static_cast<Label>(community_draw(rng));
    degrees[i] = params.deg_min + degree_draw(rng);
  }

  // drop empty communities, keeping the relative order of the rest
  std::vector<Label> compact(k, 0);
  {
    std::vector<char> used(k, 0);
    for (Label l : raw_labels) used[l] = 1;
    Label next = 0;
    for (std::size_t r = 0; r < k; ++r) compact[r] = used[r] ? next++ : 0;
    for (auto& l : raw_labels) l = compact[l];
  }
  Partition truth(std::move(raw_labels));
  const auto labels = truth.labels();
  BlockModel model = build_block_model(labels, degrees, truth.community_count(), params.mu);

  // A_ij ~ Poisson(theta_i theta_j omega); a draw >= 1 becomes one edge,
  // i.e. Bernoulli(1 - exp(-mean)).
  std::vector<Edge> edges;
  for (NodeId i = 1; i < n; ++i) {
    const double theta_i = model.theta[i];
    const double* omega_row = model.omega.data() + static_cast<std::size_t>(labels[i]) * model.communities;
    for (NodeId j = 0; j < i; ++j) {
      const double mean = theta_i * model.theta[j] * omega_row[labels[j]];
      const double p = -std::expm1(-mean);
      if (uniform01(rng) < p) edges.push_back({j, i});
    }
  }

  GeneratedGraph out;
  out.graph = Graph::from_edges(n, edges);
  out.truth = std::move(truth);
  out.model = std::move(model);
  out.target_degrees = std::move(degrees);
  return out;
}

}  // namespace cdkit
