#include "cdkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdkit {
namespace {

Eigen::VectorXd degree_vector(const Graph& g) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) d[v] = g.strength(v);
  return d;
}

void check_square(const Graph& g, const Matrix& s_hat) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (s_hat.rows() != n || s_hat.cols() != n) throw std::invalid_argument("score matrix does not match graph size");
}

}  // namespace

GroundTruthPairs build_ground_truth(const Partition& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  GroundTruthPairs t;
  t.s.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      t.s(i, j) = p[static_cast<NodeId>(i)] == p[static_cast<NodeId>(j)] ? 1.0 : 0.0;
    }
  }
  return t;
}

double loss_mod(const Graph& g, const Matrix& s_hat, double lambda) {
  check_square(g, s_hat);
  const double m = g.total_weight();
  if (m == 0.0) throw std::domain_error("relaxed modularity is undefined without edges");
  double edge_term = 0.0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto nbrs = g.neighbors(i);
    const auto w = g.neighbor_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] > i) edge_term += (w.empty() ? 1.0 : w[k]) * s_hat(i, nbrs[k]);
    }
  }
  const Eigen::VectorXd d = degree_vector(g);
  const double null_term = d.dot(s_hat * d);
  return -(edge_term / m - lambda / (4.0 * m * m) * null_term);
}

Matrix loss_mod_gradient(const Graph& g, double lambda) {
  const double m = g.total_weight();
  if (m == 0.0) throw std::domain_error("relaxed modularity is undefined without edges");
  const Eigen::VectorXd d = degree_vector(g);
  Matrix grad = (lambda / (4.0 * m * m)) * (d * d.transpose());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const auto nbrs = g.neighbors(i);
    const auto w = g.neighbor_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] > i) grad(i, nbrs[k]) -= (w.empty() ? 1.0 : w[k]) / m;
    }
  }
  return grad;
}

double loss_bce(const GroundTruthPairs& truth, const Matrix& s_hat) {
  if (s_hat.rows() != truth.s.rows() || s_hat.cols() != truth.s.cols()) {
    throw std::invalid_argument("score matrix does not match ground truth size");
  }
  double loss = 0.0;
  for (Eigen::Index k = 0; k < s_hat.size(); ++k) {
    const double p = std::clamp(s_hat.data()[k], kBceEpsilon, 1.0 - kBceEpsilon);
    const double y = truth.s.data()[k];
    loss -= y * std::log(p) + (1.0 - y) * std::log1p(-p);
  }
  return loss;
}

Matrix loss_bce_gradient(const GroundTruthPairs& truth, const Matrix& s_hat) {
  if (s_hat.rows() != truth.s.rows() || s_hat.cols() != truth.s.cols()) {
    throw std::invalid_argument("score matrix does not match ground truth size");
  }
  Matrix grad(s_hat.rows(), s_hat.cols());
  for (Eigen::Index k = 0; k < s_hat.size(); ++k) {
    const double p = s_hat.data()[k];
    const double y = truth.s.data()[k];
    grad.data()[k] = (p < kBceEpsilon || p > 1.0 - kBceEpsilon) ? 0.0 : -(y / p - (1.0 - y) / (1.0 - p));
  }
  return grad;
}

double loss_total(const Graph& g, const GroundTruthPairs& truth, const Matrix& s_hat, double alpha, double lambda) {
  return loss_mod(g, s_hat, lambda) + alpha * loss_bce(truth, s_hat);
}

}  // namespace cdkit
