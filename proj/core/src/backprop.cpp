#include "cdkit/backprop.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdkit {
namespace {

struct RowNorm {
  Matrix z;
  Eigen::VectorXd norm;
};

RowNorm rownorm(const Matrix& u) {
  RowNorm r{u, {}};
  normalize_rows(r.z, &r.norm);
  return r;
}

// d/du of u / |u| applied to dz; zero-norm rows (replaced by e_0) get none.
Matrix rownorm_backward(const RowNorm& r, const Matrix& dz) {
  Matrix du(dz.rows(), dz.cols());
  for (Eigen::Index i = 0; i < dz.rows(); ++i) {
    if (r.norm[i] == 0.0) {
      du.row(i).setZero();
      continue;
    }
    const double proj = r.z.row(i).dot(dz.row(i));
    du.row(i) = (dz.row(i) - proj * r.z.row(i)) / r.norm[i];
  }
  return du;
}

Matrix affine(const Matrix& u, const Dense& layer) {
  Matrix a = u * layer.weight;
  a.rowwise() += layer.bias.row(0);
  return a;
}

void accumulate_dense(Dense& grad, const Matrix& input, const Matrix& da) {
  grad.weight.noalias() += input.transpose() * da;
  grad.bias += da.colwise().sum();
}

struct MlpTrace {
  // inputs[s] feeds layer s; outputs[s] is tanh(a_s) for hidden layers
  // and the pre-activation a_s for the final ReLU layer of a head
  std::vector<Matrix> inputs;
  std::vector<Matrix> outputs;
  Matrix result;
};

MlpTrace feature_forward(const std::vector<Dense>& layers, const Matrix& raw) {
  MlpTrace t;
  Matrix u = raw;
  for (const Dense& layer : layers) {
    t.inputs.push_back(u);
    u = affine(u, layer).array().tanh().matrix();
    t.outputs.push_back(u);
  }
  t.result = std::move(u);
  return t;
}

void feature_backward(const std::vector<Dense>& layers, const MlpTrace& t, Matrix du, std::vector<Dense>& grads) {
  for (std::size_t s = layers.size(); s-- > 0;) {
    const Matrix da = du.cwiseProduct((1.0 - t.outputs[s].array().square()).matrix());
    accumulate_dense(grads[s], t.inputs[s], da);
    if (s > 0) du = da * layers[s].weight.transpose();
  }
}

MlpTrace head_trace(const std::vector<Dense>& layers, const Matrix& z) {
  MlpTrace t;
  Matrix u = z;
  for (std::size_t s = 0; s < layers.size(); ++s) {
    t.inputs.push_back(u);
    Matrix a = affine(u, layers[s]);
    if (s + 1 < layers.size()) {
      Matrix h = a.array().tanh().matrix();
      u = h + u;
      t.outputs.push_back(std::move(h));
    } else {
      u = a.cwiseMax(0.0);
      t.outputs.push_back(std::move(a));
    }
  }
  t.result = std::move(u);
  return t;
}

// Returns the gradient with respect to the head input.
Matrix head_backward(const std::vector<Dense>& layers, const MlpTrace& t, Matrix du, std::vector<Dense>& grads) {
  for (std::size_t s = layers.size(); s-- > 0;) {
    Matrix da;
    if (s + 1 == layers.size()) {
      da = (t.outputs[s].array() > 0.0).select(du, 0.0);
    } else {
      da = du.cwiseProduct((1.0 - t.outputs[s].array().square()).matrix());
    }
    accumulate_dense(grads[s], t.inputs[s], da);
    Matrix back = da * layers[s].weight.transpose();
    if (s + 1 < layers.size()) back += du;
    du = std::move(back);
  }
  return du;
}

struct Trace {
  MlpTrace feat;
  Matrix x;
  std::vector<Matrix> gnn_in;  // P Z^[s-1]
  std::vector<Matrix> gnn_t;   // tanh(P Z^[s-1] W^[s])
  std::vector<RowNorm> gnn_z;
  Matrix zsum;
  RowNorm z;
  MlpTrace src, dst;
  Matrix gram;  // diagonal forced to 1, clamped to <= 1
  Matrix tau;
  Matrix s_hat;
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Trace forward(const Graph& g, const Matrix& raw, const ModelParams& params, std::size_t dense_limit) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (g.node_count() > dense_limit) {
    throw std::length_error("graph with " + std::to_string(n) + " nodes exceeds the dense limit of " +
                            std::to_string(dense_limit));
  }
  if (raw.rows() != n || raw.cols() != params.dims.dim) {
    throw std::invalid_argument("raw input shape does not match graph and model");
  }
  Trace t;
  if (params.variant.modularity_features) {
    t.feat = feature_forward(params.feat, raw);
    t.x = t.feat.result;
  } else {
    t.x = raw;
  }
  if (params.variant.encoder) {
    const Matrix* prev = &t.x;
    t.zsum = Matrix::Zero(n, params.dims.dim);
    for (const Matrix& w : params.gnn) {
      t.gnn_in.push_back(propagate(g, *prev));
      t.gnn_t.push_back((t.gnn_in.back() * w).array().tanh().matrix());
      t.gnn_z.push_back(rownorm(t.gnn_t.back()));
      t.zsum += t.gnn_z.back().z;
      prev = &t.gnn_z.back().z;
    }
    t.z = rownorm(affine(t.zsum, params.out));
  } else {
    t.z = rownorm(t.x);
  }
  t.gram = t.z.z * t.z.z.transpose();
  t.gram.diagonal().setOnes();
  t.gram = t.gram.cwiseMin(1.0);
  if (params.variant.pair_temperature) {
    t.src = head_trace(params.src_head, t.z.z);
    t.dst = head_trace(params.dst_head, t.z.z);
    t.tau = t.src.result * t.dst.result.transpose();
    t.s_hat = (2.0 * t.tau.array() * (t.gram.array() - 1.0)).exp().matrix();
  } else {
    const double temp = params.variant.naive_temperature;
    t.s_hat = t.gram.unaryExpr([temp](double v) { return sigmoid(v / temp); });
  }
  return t;
}

LossTerms losses(const Graph& g, const GroundTruthPairs& truth, const Matrix& s_hat, const Objective& obj) {
  LossTerms l;
  l.mod = loss_mod(g, s_hat, obj.lambda);
  l.bce = loss_bce(truth, s_hat);
  l.total = (obj.use_mod ? l.mod : 0.0) + (obj.use_bce ? obj.alpha * l.bce : 0.0);
  return l;
}

}  // namespace

void Objective::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!use_mod && !use_bce) throw std::invalid_argument("at least one loss term must be enabled");
}

Matrix dense_scores(const Graph& g, const Matrix& raw, const ModelParams& params, std::size_t dense_limit) {
  return forward(g, raw, params, dense_limit).s_hat;
}

LossTerms evaluate_objective(const Graph& g, const GroundTruthPairs& truth, const Matrix& raw,
                             const ModelParams& params, const Objective& obj) {
  obj.validate();
  return losses(g, truth, dense_scores(g, raw, params, obj.dense_limit), obj);
}

GradientResult objective_gradients(const Graph& g, const GroundTruthPairs& truth, const Matrix& raw,
                                   const ModelParams& params, const Objective& obj) {
  obj.validate();
  const Trace t = forward(g, raw, params, obj.dense_limit);
  GradientResult r;
  r.loss = losses(g, truth, t.s_hat, obj);
  r.grad = params.zeros_like();

  Matrix gs = Matrix::Zero(t.s_hat.rows(), t.s_hat.cols());
  if (obj.use_mod) gs += loss_mod_gradient(g, obj.lambda);
  if (obj.use_bce) gs += obj.alpha * loss_bce_gradient(truth, t.s_hat);

  // gradient with respect to the clamped Gram matrix
  Matrix dgram;
  Matrix dz;
  if (params.variant.pair_temperature) {
    const Matrix rs = gs.cwiseProduct(t.s_hat);
    const Matrix dtau = 2.0 * rs.cwiseProduct((t.gram.array() - 1.0).matrix());
    dgram = 2.0 * rs.cwiseProduct(t.tau);
    const Matrix dhs = dtau * t.dst.result;
    const Matrix dhd = dtau.transpose() * t.src.result;
    dz = head_backward(params.src_head, t.src, dhs, r.grad.src_head);
    dz += head_backward(params.dst_head, t.dst, dhd, r.grad.dst_head);
  } else {
    const double temp = params.variant.naive_temperature;
    dgram = (gs.array() * t.s_hat.array() * (1.0 - t.s_hat.array()) / temp).matrix();
    dz = Matrix::Zero(t.z.z.rows(), t.z.z.cols());
  }
  // the diagonal is constant; clamped entries pass no gradient
  const Matrix raw_gram = t.z.z * t.z.z.transpose();
  for (Eigen::Index i = 0; i < dgram.rows(); ++i) {
    for (Eigen::Index j = 0; j < dgram.cols(); ++j) {
      if (i == j || raw_gram(i, j) > 1.0) dgram(i, j) = 0.0;
    }
  }
  dz.noalias() += (dgram + dgram.transpose()) * t.z.z;

  Matrix dx;
  if (params.variant.encoder) {
    const Matrix du = rownorm_backward(t.z, dz);
    accumulate_dense(r.grad.out, t.zsum, du);
    const Matrix dzsum = du * params.out.weight.transpose();
    Matrix carry = Matrix::Zero(dzsum.rows(), dzsum.cols());
    for (std::size_t s = params.gnn.size(); s-- > 0;) {
      const Matrix dzs = dzsum + carry;
      const Matrix dtl = rownorm_backward(t.gnn_z[s], dzs);
      const Matrix dy = dtl.cwiseProduct((1.0 - t.gnn_t[s].array().square()).matrix());
      r.grad.gnn[s].noalias() += t.gnn_in[s].transpose() * dy;
      // P is symmetric
      carry = propagate(g, dy * params.gnn[s].transpose());
    }
    dx = std::move(carry);
  } else {
    dx = rownorm_backward(t.z, dz);
  }
  if (params.variant.modularity_features) feature_backward(params.feat, t.feat, std::move(dx), r.grad.feat);
  return r;
}

}  // namespace cdkit
