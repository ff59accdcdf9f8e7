#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cdkit/backprop.hpp"
#include "oracles.hpp"

namespace cdkit {
namespace {

struct Instance {
  Graph graph;
  GroundTruthPairs truth;
  Matrix raw;
  ModelParams params;
};

Instance make_instance(const ModelVariant& variant, std::uint64_t seed, std::size_t n = 40, int d = 8) {
  Rng rng(seed);
  Instance in;
  in.graph = testing::random_graph(n, 0.12, rng);
  in.truth = build_ground_truth(testing::random_partition(n, 4, rng));
  ModelDims dims;
  dims.dim = d;
  in.params = ModelParams::initialize(dims, variant, seed + 1);
  testing::randomize_biases(in.params, seed + 2);
  in.raw = raw_input(in.graph, {.seed = seed + 3, .dim = d}, in.params);
  return in;
}

std::vector<std::string> tensor_names(const ModelParams& p) {
  std::vector<std::string> names;
  p.for_each_tensor([&](const std::string& n, const Matrix&) { names.push_back(n); });
  return names;
}

double grad_norm(const ModelParams& g, const std::string& prefix) {
  double s = 0.0;
  g.for_each_tensor([&](const std::string& n, const Matrix& t) {
    if (n.starts_with(prefix)) s += t.squaredNorm();
  });
  return s;
}

TEST(Objective, Validation) {
  Objective o;
  EXPECT_NO_THROW(o.validate());
  o.alpha = 0.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.lambda = -1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.use_mod = o.use_bce = false;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(DenseScores, MatchesModelForward) {
  const Instance in = make_instance({}, 1, 20);
  const Matrix s = dense_scores(in.graph, in.raw, in.params);
  const Matrix ref = score_dense(encode(in.graph, input_from_raw(in.raw, in.params), in.params), in.params);
  EXPECT_LT((s - ref).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(dense_scores(in.graph, in.raw, in.params, 19), std::length_error);
}

TEST(ObjectiveTerms, AgreeWithLosses) {
  const Instance in = make_instance({}, 2, 20);
  Objective o;
  o.alpha = 0.2;
  o.lambda = 1.5;
  const Matrix s = dense_scores(in.graph, in.raw, in.params);
  const LossTerms t = evaluate_objective(in.graph, in.truth, in.raw, in.params, o);
  EXPECT_NEAR(t.mod, loss_mod(in.graph, s, 1.5), 1e-12);
  EXPECT_NEAR(t.bce, loss_bce(in.truth, s), 1e-9);
  EXPECT_NEAR(t.total, t.mod + 0.2 * t.bce, 1e-9);
  o.use_mod = false;
  EXPECT_NEAR(evaluate_objective(in.graph, in.truth, in.raw, in.params, o).total, 0.2 * t.bce, 1e-9);
  o.use_mod = true;
  o.use_bce = false;
  EXPECT_NEAR(evaluate_objective(in.graph, in.truth, in.raw, in.params, o).total, t.mod, 1e-12);
}

TEST(Gradients, ShapesMatchParameters) {
  const Instance in = make_instance({}, 3, 15);
  const GradientResult r = objective_gradients(in.graph, in.truth, in.raw, in.params, {});
  EXPECT_EQ(tensor_names(r.grad), tensor_names(in.params));
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ps, gs;
  in.params.for_each_tensor([&](const std::string&, const Matrix& t) { ps.emplace_back(t.rows(), t.cols()); });
  r.grad.for_each_tensor([&](const std::string&, const Matrix& t) { gs.emplace_back(t.rows(), t.cols()); });
  EXPECT_EQ(ps, gs);
  const LossTerms t = evaluate_objective(in.graph, in.truth, in.raw, in.params, {});
  EXPECT_EQ(r.loss.total, t.total);
}

TEST(Gradients, DeadHeadHasZeroGradient) {
  Instance in = make_instance({}, 4, 20);
  // a negative bias with zero weights keeps the final ReLU of h_d at 0
  in.params.dst_head.back().weight.setZero();
  in.params.dst_head.back().bias.setConstant(-1.0);
  const GradientResult r = objective_gradients(in.graph, in.truth, in.raw, in.params, {});
  EXPECT_EQ(r.grad.dst_head.back().bias.squaredNorm(), 0.0);
  EXPECT_EQ(grad_norm(r.grad, "src_head."), 0.0);
  // tau = 0 makes every score 1, so the embedding receives no gradient either
  EXPECT_EQ(grad_norm(r.grad, "gnn."), 0.0);
}

TEST(Gradients, DisabledComponentsGetZeroGradient) {
  ModelVariant one_hot;
  one_hot.modularity_features = false;
  const Instance a = make_instance(one_hot, 5, 20);
  EXPECT_EQ(grad_norm(objective_gradients(a.graph, a.truth, a.raw, a.params, {}).grad, "feat."), 0.0);

  ModelVariant no_encoder;
  no_encoder.encoder = false;
  const Instance b = make_instance(no_encoder, 6, 20);
  const GradientResult rb = objective_gradients(b.graph, b.truth, b.raw, b.params, {});
  EXPECT_EQ(grad_norm(rb.grad, "gnn."), 0.0);
  EXPECT_EQ(grad_norm(rb.grad, "out."), 0.0);
  EXPECT_GT(grad_norm(rb.grad, "feat."), 0.0);

  ModelVariant naive;
  naive.pair_temperature = false;
  const Instance c = make_instance(naive, 7, 20);
  const GradientResult rc = objective_gradients(c.graph, c.truth, c.raw, c.params, {});
  EXPECT_EQ(grad_norm(rc.grad, "src_head."), 0.0);
  EXPECT_EQ(grad_norm(rc.grad, "dst_head."), 0.0);
  EXPECT_GT(grad_norm(rc.grad, "gnn."), 0.0);
}

struct FdCase {
  std::string name;
  ModelVariant variant;
  Objective objective;
  double step;
};

class FiniteDifference : public ::testing::TestWithParam<FdCase> {};

TEST_P(FiniteDifference, MatchesCentralDifferences) {
  const FdCase& c = GetParam();
  const Instance in = make_instance(c.variant, 11, 40, 8);
  const auto check = testing::finite_difference_check(in.graph, in.truth, in.raw, in.params, c.objective, c.step);
  EXPECT_GT(check.checked, 0u);
  EXPECT_LE(check.max_rel_error, 1e-4) << "worst " << check.worst << " of " << check.checked;
  // every coordinate at once, including the ones below the round-off floor
  EXPECT_LE(testing::directional_derivative_error(in.graph, in.truth, in.raw, in.params, c.objective, 21, 1e-6),
            1e-4);
}

Objective with(double alpha, double lambda, bool mod = true, bool bce = true) {
  Objective o;
  o.alpha = alpha;
  o.lambda = lambda;
  o.use_mod = mod;
  o.use_bce = bce;
  return o;
}

ModelVariant variant(bool feat, bool enc, bool temp) {
  ModelVariant v;
  v.modularity_features = feat;
  v.encoder = enc;
  v.pair_temperature = temp;
  v.naive_temperature = 0.5;
  return v;
}

INSTANTIATE_TEST_SUITE_P(
    Variants, FiniteDifference,
    ::testing::Values(FdCase{"full", variant(true, true, true), with(1.0, 1.0), 1e-5},
                      FdCase{"weighted", variant(true, true, true), with(1e-3, 50.0), 1e-5},
                      FdCase{"mod_only", variant(true, true, true), with(1.0, 1.0, true, false), 1e-5},
                      FdCase{"bce_only", variant(true, true, true), with(1.0, 1.0, false, true), 1e-5},
                      FdCase{"one_hot", variant(false, true, true), with(1.0, 1.0), 1e-6},
                      FdCase{"no_encoder", variant(true, false, true), with(1.0, 1.0), 1e-6},
                      FdCase{"naive", variant(true, true, false), with(1.0, 1.0), 1e-6}),
    [](const ::testing::TestParamInfo<FdCase>& info) { return info.param.name; });

}  // namespace
}  // namespace cdkit
