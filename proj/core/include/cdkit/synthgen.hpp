#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"
#include "cdkit/rng.hpp"

namespace cdkit {

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Distributions that generator parameters are drawn from. Defaults are the
/// reference pre-training setup: N ~ I(2e3, 5e3), K ~ I(2, 1e3),
/// deg_min = min{5, ceil(N / 4K)}, deg_max = min{500, ceil(N / K)},
/// gamma ~ F(2, 3.5), mu ~ F(2.5, 5), rho ~ F(1, 3), 1000 graphs.
struct GenConfig {
  IntRange nodes{2000, 5000};
  IntRange communities{2, 1000};
  RealRange gamma{2.0, 3.5};
  RealRange mu{2.5, 5.0};
  RealRange rho{1.0, 3.0};
  std::uint32_t deg_min_cap = 5;
  std::uint32_t deg_min_divisor = 4;
  std::uint32_t deg_max_cap = 500;
  std::size_t graph_count = 1000;

  /// Throws std::invalid_argument on empty ranges, non-positive reals or a
  /// community range that can exceed the smallest node count.
  void validate() const;
};

struct GenParams {
  std::size_t nodes = 0;
  std::size_t communities = 0;
  std::uint32_t deg_min = 1;
  std::uint32_t deg_max = 1;
  /// power-law exponent of target degrees
  double gamma = 2.0;
  /// within- vs between-community edge ratio
  double mu = 2.5;
  /// community-size heterogeneity; Dirichlet concentration is 10 / rho
  double rho = 1.0;

  void validate() const;
};

/// min{cap, ceil(N / (divisor K))} and min{cap, ceil(N / K)}.
std::uint32_t degree_floor(const GenConfig& cfg, std::size_t nodes, std::size_t communities);
std::uint32_t degree_ceiling(const GenConfig& cfg, std::size_t nodes, std::size_t communities);

GenParams sample_params(const GenConfig& cfg, Rng& rng);

/// Degree-corrected block structure: theta_i = deg_i / phi_{c_i},
/// omega_rr = mu/(1+mu) phi_r and omega_rt = 1/(1+mu) phi_r phi_t / phi_total.
struct BlockModel {
  std::vector<double> theta;
  /// K x K row-major
  std::vector<double> omega;
  std::vector<double> phi;
  double phi_total = 0.0;
  std::size_t communities = 0;

  double omega_at(std::size_t r, std::size_t t) const noexcept { return omega[r * communities + t]; }
  /// theta_i theta_j omega_{c_i c_j}: expected number of edges between i and j.
  double expected_edges(NodeId i, NodeId j, std::span<const Label> labels) const noexcept {
    return theta[i] * theta[j] * omega_at(labels[i], labels[j]);
  }
};

/// labels must be dense with every community non-empty; degrees >= 1.
BlockModel build_block_model(std::span<const Label> labels, std::span<const std::uint32_t> target_degrees,
                             std::size_t communities, double mu);

struct GeneratedGraph {
  Graph graph;
  Partition truth;
  BlockModel model;
  std::vector<std::uint32_t> target_degrees;
};

/// Draws one DC-SBM graph. Communities left empty by the multinomial draw are
/// removed, so truth.community_count() may be below params.communities.
/// Throws std::invalid_argument when communities > nodes.
GeneratedGraph generate_dcsbm(const GenParams& params, Rng& rng);

}  // namespace cdkit
