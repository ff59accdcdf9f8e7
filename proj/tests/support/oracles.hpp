#pragma once

// Independent reference implementations used by unit and acceptance tests.
// None of these call into the code they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cdkit/backprop.hpp"
#include "cdkit/graph.hpp"
#include "cdkit/partition.hpp"
#include "cdkit/rng.hpp"

namespace cdkit::testing {

/// G(n, p) edge list in canonical order.
inline std::vector<Edge> random_edges(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.push_back({i, j});
    }
  }
  return edges;
}

inline Graph random_graph(std::size_t n, double p, Rng& rng) {
  const auto edges = random_edges(n, p, rng);
  return Graph::from_edges(n, edges);
}

/// Labels drawn uniformly from [0, k), then densified.
inline Partition random_partition(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<Label> raw(n);
  for (auto& l : raw) l = static_cast<Label>(rng() % k);
  return Partition::from_labels(raw);
}

/// Dense adjacency matrix A[i][j].
inline std::vector<std::vector<double>> dense_adjacency(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) {
    const double w = g.edge_weight(e.u, e.v);
    a[e.u][e.v] = w;
    a[e.v][e.u] = w;
  }
  return a;
}

/// (1/2M) sum over ordered pairs (i, j), diagonal included, of
/// [A_ij - res d_i d_j / 2M] delta(c_i, c_j).
inline double brute_force_modularity(const Graph& g, std::span<const Label> labels, double res = 1.0) {
  const auto a = dense_adjacency(g);
  const std::size_t n = g.node_count();
  std::vector<double> d(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i] += a[i][j];
    two_m += d[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[i] == labels[j]) q += a[i][j] - res * d[i] * d[j] / two_m;
    }
  }
  return q / two_m;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

/// True when two label vectors induce the same grouping; checks the
/// bijection explicitly without using Partition.
inline bool permutation_equivalent(std::span<const Label> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) return false;
  std::vector<std::pair<std::size_t, std::size_t>> ab, ba;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < a.size(); ++i) seen.insert({a[i], b[i]});
  std::set<std::size_t> left, right;
  for (const auto& [x, y] : seen) {
    if (!left.insert(x).second || !right.insert(y).second) return false;
  }
  return true;
}

/// Union-find component roots of (n, edges).
inline std::vector<std::size_t> union_find_roots(std::size_t n, std::span<const Edge> edges) {
  UnionFind uf(n);
  for (const Edge& e : edges) uf.unite(e.u, e.v);
  std::vector<std::size_t> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = uf.find(i);
  return roots;
}

/// Every tensor's biases set to uniform(-scale, scale); keeps a gradient
/// check away from the zero-row kink of row normalization.
inline void randomize_biases(ModelParams& params, std::uint64_t seed, double scale = 0.1) {
  Rng rng(seed);
  params.for_each_tensor([&](const std::string& name, Matrix& t) {
    if (name.size() < 5 || name.compare(name.size() - 5, 5, ".bias") != 0) return;
    for (Eigen::Index k = 0; k < t.size(); ++k) t.data()[k] = scale * (2.0 * uniform01(rng) - 1.0);
  });
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::string worst;
  std::size_t checked = 0;
  std::size_t dead = 0;
};

/// Central differences of the objective for every coordinate of every
/// tensor. A coordinate is dead when both the analytic and the numerical
/// derivative are below max(dead_tol, round-off floor of the difference
/// quotient), the floor being 64 eps |f| / step.
inline GradCheck finite_difference_check(const Graph& g, const GroundTruthPairs& truth, const Matrix& raw,
                                         ModelParams params, const Objective& obj, double step = 1e-5,
                                         double dead_tol = 1e-7) {
  const GradientResult analytic = objective_gradients(g, truth, raw, params, obj);
  std::vector<const Matrix*> grads;
  analytic.grad.for_each_tensor([&](const std::string&, const Matrix& t) { grads.push_back(&t); });
  GradCheck out;
  const double f0 = evaluate_objective(g, truth, raw, params, obj).total;
  const double floor =
      std::max(dead_tol, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f0) / step);
  std::size_t k = 0;
  params.for_each_tensor([&](const std::string& name, Matrix& t) {
    const Matrix& gt = *grads[k++];
    for (Eigen::Index e = 0; e < t.size(); ++e) {
      const double saved = t.data()[e];
      t.data()[e] = saved + step;
      const double plus = evaluate_objective(g, truth, raw, params, obj).total;
      t.data()[e] = saved - step;
      const double minus = evaluate_objective(g, truth, raw, params, obj).total;
      t.data()[e] = saved;
      const double fd = (plus - minus) / (2.0 * step);
      const double an = gt.data()[e];
      const double scale = std::max(std::abs(fd), std::abs(an));
      if (scale < floor) {
        ++out.dead;
        continue;
      }
      ++out.checked;
      const double rel = std::abs(fd - an) / scale;
      if (rel > out.max_rel_error) {
        out.max_rel_error = rel;
        out.worst = name + "[" + std::to_string(e) + "]";
      }
    }
  });
  return out;
}

/// Central difference of the objective along a Gaussian direction d against
/// the analytic <grad, d>. Returns the relative error.
inline double directional_derivative_error(const Graph& g, const GroundTruthPairs& truth, const Matrix& raw,
                                           const ModelParams& params, const Objective& obj, std::uint64_t seed,
                                           double step) {
  const GradientResult analytic = objective_gradients(g, truth, raw, params, obj);
  std::vector<Matrix> dir;
  Rng rng(seed);
  std::normal_distribution<double> normal;
  double predicted = 0.0;
  analytic.grad.for_each_tensor([&](const std::string&, const Matrix& gt) {
    Matrix d(gt.rows(), gt.cols());
    for (Eigen::Index e = 0; e < d.size(); ++e) d.data()[e] = normal(rng);
    predicted += (d.array() * gt.array()).sum();
    dir.push_back(std::move(d));
  });
  auto shifted = [&](double h) {
    ModelParams q = params;
    std::size_t k = 0;
    q.for_each_tensor([&](const std::string&, Matrix& t) { t += h * dir[k++]; });
    return evaluate_objective(g, truth, raw, q, obj).total;
  };
  const double fd = (shifted(step) - shifted(-step)) / (2.0 * step);
  return std::abs(fd - predicted) / std::max(std::abs(predicted), 1e-300);
}

}  // namespace cdkit::testing
