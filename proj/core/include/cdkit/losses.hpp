#pragma once

#include "cdkit/graph.hpp"
#include "cdkit/model.hpp"
#include "cdkit/partition.hpp"

namespace cdkit {

/// Dense co-membership indicator: s(i, j) = 1 iff i and j share a community.
struct GroundTruthPairs {
  Matrix s;

  std::size_t size() const noexcept { return static_cast<std::size_t>(s.rows()); }
};

GroundTruthPairs build_ground_truth(const Partition& p);

/// Relaxed modularity loss
///   -[ (1/M) sum_{i<j, ij in E} S^_ij - (lambda / 4M^2) d^T S^ d ]
/// with d the (weighted) degree vector. Throws std::domain_error when M = 0.
double loss_mod(const Graph& g, const Matrix& s_hat, double lambda);

/// dL_mod / dS^, a constant matrix.
Matrix loss_mod_gradient(const Graph& g, double lambda);

inline constexpr double kBceEpsilon = 1e-7;

/// Binary cross entropy over all N^2 ordered pairs, S^ clipped to
/// [eps, 1 - eps]. Throws std::invalid_argument on shape mismatch.
double loss_bce(const GroundTruthPairs& truth, const Matrix& s_hat);

/// dL_bce / dS^; zero where the clip is active.
Matrix loss_bce_gradient(const GroundTruthPairs& truth, const Matrix& s_hat);

/// loss_mod + alpha * loss_bce.
double loss_total(const Graph& g, const GroundTruthPairs& truth, const Matrix& s_hat, double alpha, double lambda);

}  // namespace cdkit
