#include "cdkit/model.hpp"

#include <cmath>
#include <stdexcept>

#include "cdkit/rng.hpp"

namespace cdkit {
namespace {

Dense glorot_layer(int in, int out, Rng& rng) {
  Dense layer;
  const double limit = std::sqrt(6.0 / (in + out));
  layer.weight.resize(in, out);
  for (Eigen::Index k = 0; k < layer.weight.size(); ++k) {
    layer.weight.data()[k] = (2.0 * uniform01(rng) - 1.0) * limit;
  }
  layer.bias = Matrix::Zero(1, out);
  return layer;
}

void check_unit(const RowVector& z) {
  if (std::abs(z.norm() - 1.0) > 1e-6) throw std::invalid_argument("pair_score expects unit-norm embeddings");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw std::invalid_argument("tensor " + name + " has shape " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

}  // namespace

ModelParams ModelParams::initialize(const ModelDims& dims, const ModelVariant& variant, std::uint64_t seed) {
  if (dims.dim < 1 || dims.feat_layers < 1 || dims.gnn_layers < 1 || dims.bc_layers < 1) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (!variant.pair_temperature && variant.naive_temperature == 0.0) {
    throw std::invalid_argument("naive classifier temperature must be non-zero");
  }
  ModelParams p;
  p.dims = dims;
  p.variant = variant;
  p.projection_seed = derive_seed(seed, 0x70726f6au);
  Rng rng(seed);
  const int d = dims.dim;
  for (int s = 0; s < dims.feat_layers; ++s) p.feat.push_back(glorot_layer(d, d, rng));
  for (int s = 0; s < dims.gnn_layers; ++s) p.gnn.push_back(glorot_layer(d, d, rng).weight);
  p.out = glorot_layer(d, d, rng);
  for (int s = 0; s < dims.bc_layers; ++s) p.src_head.push_back(glorot_layer(d, d, rng));
  for (int s = 0; s < dims.bc_layers; ++s) p.dst_head.push_back(glorot_layer(d, d, rng));
  return p;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  z.for_each_tensor([](const std::string&, Matrix& t) { t.setZero(); });
  return z;
}

void ModelParams::validate() const {
  const int d = dims.dim;
  if (d < 1) throw std::invalid_argument("model dimension must be positive");
  if (feat.size() != static_cast<std::size_t>(dims.feat_layers) ||
      gnn.size() != static_cast<std::size_t>(dims.gnn_layers) ||
      src_head.size() != static_cast<std::size_t>(dims.bc_layers) ||
      dst_head.size() != static_cast<std::size_t>(dims.bc_layers)) {
    throw std::invalid_argument("layer counts disagree with model dimensions");
  }
  for_each_tensor([d](const std::string& name, const Matrix& t) {
    const bool bias = name.size() > 5 && name.compare(name.size() - 5, 5, ".bias") == 0;
    check_shape(t, bias ? 1 : d, d, name);
  });
  if (!variant.pair_temperature && variant.naive_temperature == 0.0) {
    throw std::invalid_argument("naive classifier temperature must be non-zero");
  }
}

std::size_t ModelParams::parameter_count() const {
  std::size_t count = 0;
  for_each_tensor([&count](const std::string&, const Matrix& t) { count += static_cast<std::size_t>(t.size()); });
  return count;
}

Matrix projection_matrix(std::size_t rows, const ProjectionSpec& spec) {
  if (spec.dim < 1) throw std::invalid_argument("projection dimension must be positive");
  Matrix omega(static_cast<Eigen::Index>(rows), spec.dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.dim));
  for (int c = 0; c < spec.dim; ++c) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(c)));
    NormalSampler normal;
    for (std::size_t r = 0; r < rows; ++r) omega(static_cast<Eigen::Index>(r), c) = normal(rng) * scale;
  }
  return omega;
}

Matrix project(const SparseFeatureMatrix& q, const ProjectionSpec& spec) {
  if (spec.dim < 1 || spec.block_width < 1) throw std::invalid_argument("invalid projection spec");
  const std::size_t n = q.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.dim));
  Matrix result = Matrix::Zero(static_cast<Eigen::Index>(n), spec.dim);
  Matrix block(static_cast<Eigen::Index>(n), spec.block_width);
  for (int c0 = 0; c0 < spec.dim; c0 += spec.block_width) {
    const int width = std::min(spec.block_width, spec.dim - c0);
    for (int c = 0; c < width; ++c) {
      Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(c0 + c)));
      NormalSampler normal;
      for (std::size_t r = 0; r < n; ++r) block(static_cast<Eigen::Index>(r), c) = normal(rng) * scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto out_row = result.row(static_cast<Eigen::Index>(i)).segment(c0, width);
      for (std::size_t k = q.offsets[i]; k < q.offsets[i + 1]; ++k) {
        out_row += q.values[k] * block.row(q.columns[k]).head(width);
      }
    }
  }
  return result;
}

Matrix feature_mlp(const std::vector<Dense>& layers, const Matrix& input) {
  Matrix u = input;
  for (const Dense& layer : layers) {
    Matrix a = u * layer.weight;
    a.rowwise() += layer.bias.row(0);
    u = a.array().tanh().matrix();
  }
  return u;
}

Matrix extract_features(const SparseFeatureMatrix& q, const ProjectionSpec& spec, const ModelParams& params) {
  if (spec.dim != params.dims.dim) {
    throw std::invalid_argument("projection dimension " + std::to_string(spec.dim) + " does not match model dimension " +
                                std::to_string(params.dims.dim));
  }
  return feature_mlp(params.feat, project(q, spec));
}

Matrix degree_one_hot(const Graph& g, int dim) {
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(g.node_count()), dim);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    x(v, std::min<int>(static_cast<int>(g.degree(v)), dim - 1)) = 1.0;
  }
  return x;
}

Matrix raw_input(const Graph& g, const ProjectionSpec& spec, const ModelParams& params) {
  if (spec.dim != params.dims.dim) {
    throw std::invalid_argument("projection dimension " + std::to_string(spec.dim) + " does not match model dimension " +
                                std::to_string(params.dims.dim));
  }
  if (!params.variant.modularity_features) return degree_one_hot(g, params.dims.dim);
  if (g.edge_count() == 0) return Matrix::Zero(static_cast<Eigen::Index>(g.node_count()), params.dims.dim);
  return project(reduced_modularity_features(g), spec);
}

Matrix input_from_raw(const Matrix& raw, const ModelParams& params) {
  return params.variant.modularity_features ? feature_mlp(params.feat, raw) : raw;
}

Matrix input_features(const Graph& g, const ProjectionSpec& spec, const ModelParams& params) {
  return input_from_raw(raw_input(g, spec, params), params);
}

Matrix propagate(const Graph& g, const Matrix& m) {
  const std::size_t n = g.node_count();
  Eigen::VectorXd inv_sqrt(static_cast<Eigen::Index>(n));
  for (NodeId v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(g.strength(v) + 1.0);
  Matrix out(m.rows(), m.cols());
  for (NodeId i = 0; i < n; ++i) {
    auto row = out.row(i);
    row = m.row(i) * inv_sqrt[i];
    const auto nbrs = g.neighbors(i);
    const auto w = g.neighbor_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const double weight = w.empty() ? 1.0 : w[k];
      row += (weight * inv_sqrt[nbrs[k]]) * m.row(nbrs[k]);
    }
    row *= inv_sqrt[i];
  }
  return out;
}

void normalize_rows(Matrix& m, Eigen::VectorXd* norms) {
  if (norms) norms->resize(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norms) (*norms)[i] = norm;
    if (norm > 0.0) {
      m.row(i) /= norm;
    } else {
      m.row(i).setZero();
      m(i, 0) = 1.0;
    }
  }
}

Embeddings encode(const Graph& g, const Matrix& x, const ModelParams& params) {
  if (x.rows() != static_cast<Eigen::Index>(g.node_count()) || x.cols() != params.dims.dim) {
    throw std::invalid_argument("feature matrix shape does not match graph and model");
  }
  Embeddings emb;
  if (!params.variant.encoder) {
    emb.z = x;
    normalize_rows(emb.z);
    return emb;
  }
  Matrix layer_in = x;
  Matrix summed = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& w : params.gnn) {
    Matrix t = (propagate(g, layer_in) * w).array().tanh().matrix();
    normalize_rows(t);
    summed += t;
    layer_in = std::move(t);
  }
  emb.z = summed * params.out.weight;
  emb.z.rowwise() += params.out.bias.row(0);
  normalize_rows(emb.z);
  return emb;
}

Matrix head_forward(const std::vector<Dense>& layers, const Matrix& input) {
  Matrix u = input;
  for (std::size_t s = 0; s < layers.size(); ++s) {
    Matrix a = u * layers[s].weight;
    a.rowwise() += layers[s].bias.row(0);
    if (s + 1 < layers.size()) {
      u = a.array().tanh().matrix() + u;
    } else {
      u = a.cwiseMax(0.0);
    }
  }
  return u;
}

double pair_score(const RowVector& zi, const RowVector& zj, const ModelParams& params) {
  check_unit(zi);
  check_unit(zj);
  const double tau = head_forward(params.src_head, zi).row(0).dot(head_forward(params.dst_head, zj).row(0));
  const double cosine = std::min(1.0, zi.dot(zj));
  return std::exp(2.0 * tau * (cosine - 1.0));
}

double pair_score_naive(const RowVector& zi, const RowVector& zj, double temperature) {
  if (temperature == 0.0) throw std::invalid_argument("temperature must be non-zero");
  return sigmoid(zi.dot(zj) / temperature);
}

std::vector<double> score_batch(const Embeddings& emb, std::span<const Edge> pairs, const ModelParams& params) {
  const auto n = emb.size();
  for (const Edge& p : pairs) {
    if (p.u == p.v) throw std::invalid_argument("self-pair (" + std::to_string(p.u) + ", " + std::to_string(p.v) + ")");
    if (p.u >= n || p.v >= n) throw std::invalid_argument("pair endpoint out of range");
  }
  std::vector<double> scores(pairs.size());
  if (pairs.empty()) return scores;
  if (!params.variant.pair_temperature) {
    const double t = params.variant.naive_temperature;
    for (std::size_t l = 0; l < pairs.size(); ++l) {
      const Edge e = canonical(pairs[l]);
      scores[l] = sigmoid(emb.z.row(e.u).dot(emb.z.row(e.v)) / t);
    }
    return scores;
  }
  const Matrix src = head_forward(params.src_head, emb.z);
  const Matrix dst = head_forward(params.dst_head, emb.z);
  for (std::size_t l = 0; l < pairs.size(); ++l) {
    const Edge e = canonical(pairs[l]);
    const double tau = src.row(e.u).dot(dst.row(e.v));
    const double cosine = std::min(1.0, emb.z.row(e.u).dot(emb.z.row(e.v)));
    scores[l] = std::exp(2.0 * tau * (cosine - 1.0));
  }
  return scores;
}

Matrix score_dense(const Embeddings& emb, const ModelParams& params, std::size_t dense_limit) {
  const auto n = emb.size();
  if (n > dense_limit) {
    throw std::length_error("dense score matrix for " + std::to_string(n) + " nodes exceeds the limit of " +
                            std::to_string(dense_limit));
  }
  Matrix gram = emb.z * emb.z.transpose();
  gram.diagonal().setOnes();
  if (!params.variant.pair_temperature) {
    const double t = params.variant.naive_temperature;
    return gram.unaryExpr([t](double g) { return sigmoid(g / t); });
  }
  const Matrix src = head_forward(params.src_head, emb.z);
  const Matrix dst = head_forward(params.dst_head, emb.z);
  const Matrix tau = src * dst.transpose();
  return (2.0 * tau.array() * (gram.array().min(1.0) - 1.0)).exp().matrix();
}

}  // namespace cdkit
