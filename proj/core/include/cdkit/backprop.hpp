#pragma once

#include <cstddef>

#include "cdkit/graph.hpp"
#include "cdkit/losses.hpp"
#include "cdkit/model.hpp"

namespace cdkit {

/// Pre-training objective L_mod + alpha L_bce; either term can be switched
/// off for the loss ablations.
struct Objective {
  double alpha = 1.0;
  double lambda = 1.0;
  bool use_mod = true;
  bool use_bce = true;
  std::size_t dense_limit = kDefaultDenseLimit;

  /// Throws std::invalid_argument unless alpha > 0, lambda > 0 and at least
  /// one term is enabled.
  void validate() const;
};

/// Both terms are always evaluated; total honors the switches.
struct LossTerms {
  double mod = 0.0;
  double bce = 0.0;
  double total = 0.0;
};

struct GradientResult {
  LossTerms loss;
  /// same structure as the parameters
  ModelParams grad;
};

/// Dense forward pass from raw_input() to S^.
Matrix dense_scores(const Graph& g, const Matrix& raw, const ModelParams& params,
                    std::size_t dense_limit = kDefaultDenseLimit);

LossTerms evaluate_objective(const Graph& g, const GroundTruthPairs& truth, const Matrix& raw,
                             const ModelParams& params, const Objective& obj);

/// Exact reverse-mode gradients of evaluate_objective().total with respect
/// to every tensor; raw (the projected features) is a constant. Throws
/// std::length_error above the dense limit.
GradientResult objective_gradients(const Graph& g, const GroundTruthPairs& truth, const Matrix& raw,
                                   const ModelParams& params, const Objective& obj);

}  // namespace cdkit
