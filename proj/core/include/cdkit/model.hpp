#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cdkit/graph.hpp"
#include "cdkit/modularity.hpp"

namespace cdkit {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::RowVectorXd;

/// One perceptron layer: u W + b, W is in x out, b is 1 x out.
struct Dense {
  Matrix weight;
  Matrix bias;
};

struct ModelDims {
  int dim = 64;
  int feat_layers = 2;
  int gnn_layers = 2;
  int bc_layers = 2;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Component switches used by the ablation variants.
struct ModelVariant {
  /// false: X is the one-hot encoding of min(degree, d - 1)
  bool modularity_features = true;
  /// false: Z = rownorm(X), the GNN stack is skipped
  bool encoder = true;
  /// false: S_ij = sigmoid(z_i z_j^T / naive_temperature)
  bool pair_temperature = true;
  double naive_temperature = 1.0;

  friend bool operator==(const ModelVariant&, const ModelVariant&) = default;
};

/// All trainable tensors. Every tensor exists regardless of the variant;
/// tensors of disabled components simply receive zero gradient.
struct ModelParams {
  ModelDims dims;
  ModelVariant variant;
  /// seed of the Gaussian projection used at inference time
  std::uint64_t projection_seed = 0;

  std::vector<Dense> feat;
  std::vector<Matrix> gnn;
  Dense out;
  std::vector<Dense> src_head;
  std::vector<Dense> dst_head;

  /// Glorot-uniform weights, zero biases.
  static ModelParams initialize(const ModelDims& dims, const ModelVariant& variant, std::uint64_t seed);

  /// Same structure, every tensor zero.
  ModelParams zeros_like() const;

  /// Throws std::invalid_argument if any tensor shape disagrees with dims.
  void validate() const;

  std::size_t parameter_count() const;

  /// Visits every tensor in a fixed order with a stable name.
  template <class F>
  void for_each_tensor(F&& f) {
    visit(*this, f);
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    visit(*this, f);
  }

 private:
  template <class Self, class F>
  static void visit(Self& self, F& f) {
    for (std::size_t s = 0; s < self.feat.size(); ++s) {
      f("feat." + std::to_string(s) + ".weight", self.feat[s].weight);
      f("feat." + std::to_string(s) + ".bias", self.feat[s].bias);
    }
    for (std::size_t s = 0; s < self.gnn.size(); ++s) f("gnn." + std::to_string(s) + ".weight", self.gnn[s]);
    f(std::string("out.weight"), self.out.weight);
    f(std::string("out.bias"), self.out.bias);
    for (std::size_t s = 0; s < self.src_head.size(); ++s) {
      f("src_head." + std::to_string(s) + ".weight", self.src_head[s].weight);
      f("src_head." + std::to_string(s) + ".bias", self.src_head[s].bias);
    }
    for (std::size_t s = 0; s < self.dst_head.size(); ++s) {
      f("dst_head." + std::to_string(s) + ".weight", self.dst_head[s].weight);
      f("dst_head." + std::to_string(s) + ".bias", self.dst_head[s].bias);
    }
  }
};

/// Gaussian projection with i.i.d. N(0, 1/d) entries, generated column by
/// column from `seed`; column c depends only on (seed, c).
struct ProjectionSpec {
  std::uint64_t seed = 0;
  int dim = 64;
  /// columns generated per pass of project()
  int block_width = 8;
};

/// Dense rows x d projection matrix (test and small-scale use).
Matrix projection_matrix(std::size_t rows, const ProjectionSpec& spec);

/// Q~ Omega as a sparse-dense product, materializing at most block_width
/// projection columns at a time.
Matrix project(const SparseFeatureMatrix& q, const ProjectionSpec& spec);

/// tanh MLP of the feature extractor: u_s = tanh(u_{s-1} W_s + b_s).
Matrix feature_mlp(const std::vector<Dense>& layers, const Matrix& input);

/// X = feature_mlp(Q~ Omega). Throws std::invalid_argument if spec.dim
/// differs from params.dims.dim.
Matrix extract_features(const SparseFeatureMatrix& q, const ProjectionSpec& spec, const ModelParams& params);

/// One-hot encoding of min(degree, dim - 1).
Matrix degree_one_hot(const Graph& g, int dim);

/// Input before the feature MLP: Q~ Omega (all zeros for an edgeless graph)
/// or, with modularity_features off, the degree one-hot.
Matrix raw_input(const Graph& g, const ProjectionSpec& spec, const ModelParams& params);

/// X from raw_input: feature_mlp(raw), or raw itself for the one-hot variant.
Matrix input_from_raw(const Matrix& raw, const ModelParams& params);

/// input_from_raw(raw_input(g, spec, params), params).
Matrix input_features(const Graph& g, const ProjectionSpec& spec, const ModelParams& params);

/// D^-1/2 (A + I) D^-1/2 M with D the degree matrix of A + I.
Matrix propagate(const Graph& g, const Matrix& m);

/// Row-wise l2 normalization; zero rows become the first basis vector.
/// Writes the pre-normalization norms when `norms` is non-null.
void normalize_rows(Matrix& m, Eigen::VectorXd* norms = nullptr);

/// Node embeddings; every row has unit l2 norm.
struct Embeddings {
  Matrix z;

  std::size_t size() const noexcept { return static_cast<std::size_t>(z.rows()); }
};

/// Z^[s] = rownorm(tanh(P Z^[s-1] W^[s])), Z = rownorm(linear(sum_s Z^[s]))
/// with Z^[0] = X and P the normalized adjacency with self edges.
Embeddings encode(const Graph& g, const Matrix& x, const ModelParams& params);

/// Classifier head: tanh layers with skip connections, final ReLU layer.
Matrix head_forward(const std::vector<Dense>& layers, const Matrix& input);

/// exp(2 tau (z_i z_j^T - 1)) with tau = h_s(z_i) h_d(z_j)^T. Throws
/// std::invalid_argument unless both inputs have unit norm (1e-6).
double pair_score(const RowVector& zi, const RowVector& zj, const ModelParams& params);

/// sigmoid(z_i z_j^T / temperature). Throws std::invalid_argument when
/// temperature is zero.
double pair_score_naive(const RowVector& zi, const RowVector& zj, double temperature);

/// Scores pairs in canonical (min, max) orientation with the model's
/// classifier variant. Throws std::invalid_argument on self-pairs or
/// out-of-range nodes.
std::vector<double> score_batch(const Embeddings& emb, std::span<const Edge> pairs, const ModelParams& params);

inline constexpr std::size_t kDefaultDenseLimit = 6000;

/// Full N x N score matrix. The Gram diagonal is taken as exactly 1, so the
/// temperature classifier has a unit diagonal. Throws std::length_error when N exceeds dense_limit.
Matrix score_dense(const Embeddings& emb, const ModelParams& params, std::size_t dense_limit = kDefaultDenseLimit);

}  // namespace cdkit
