#include "cdkit/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "cdkit/format.hpp"
#include "cdkit/losses.hpp"
#include "cdkit/rng.hpp"

namespace cdkit {

const char* const kTrainLogHeader = "epoch,graph_id,loss_mod,loss_bce,loss_total";

namespace {

constexpr std::uint64_t kShuffleStream = 0x73687566u;

double max_abs(const ModelParams& p) {
  double m = 0.0;
  p.for_each_tensor([&m](const std::string&, const Matrix& t) {
    if (t.size()) m = std::max(m, t.cwiseAbs().maxCoeff());
  });
  return m;
}

bool all_finite(const ModelParams& p) {
  bool ok = true;
  p.for_each_tensor([&ok](const std::string&, const Matrix& t) { ok = ok && t.allFinite(); });
  return ok;
}

}  // namespace

void TrainConfig::validate() const {
  objective.validate();
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("Adam moment coefficients must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("Adam epsilon must be positive");
  if (checkpoint_every < 0) throw std::invalid_argument("checkpoint interval must be non-negative");
  if (checkpoint_every > 0 && checkpoint_dir.empty()) throw std::invalid_argument("checkpoint interval set without a directory");
}

ProjectionSpec training_projection(const TrainConfig& cfg, const ModelParams& params, std::size_t graph_index) {
  ProjectionSpec spec;
  spec.seed = derive_seed(cfg.seed, graph_index);
  spec.dim = params.dims.dim;
  return spec;
}

Adam::Adam(const ModelParams& like, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(like.zeros_like()), v_(like.zeros_like()) {}

void Adam::step(ModelParams& params, const ModelParams& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  std::vector<Matrix*> p, m, v;
  std::vector<const Matrix*> g;
  params.for_each_tensor([&p](const std::string&, Matrix& t) { p.push_back(&t); });
  m_.for_each_tensor([&m](const std::string&, Matrix& t) { m.push_back(&t); });
  v_.for_each_tensor([&v](const std::string&, Matrix& t) { v.push_back(&t); });
  grad.for_each_tensor([&g](const std::string&, const Matrix& t) { g.push_back(&t); });
  if (p.size() != g.size() || p.size() != m.size()) throw std::invalid_argument("gradient structure mismatch");
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto gk = g[k]->array();
    m[k]->array() = beta1_ * m[k]->array() + (1.0 - beta1_) * gk;
    v[k]->array() = beta2_ * v[k]->array() + (1.0 - beta2_) * gk.square();
    p[k]->array() -= lr_ * (m[k]->array() / c1) / ((v[k]->array() / c2).sqrt() + eps_);
  }
}

void Adam::restore(ModelParams m, ModelParams v, std::uint64_t steps) {
  m_ = std::move(m);
  v_ = std::move(v);
  t_ = steps;
}

void write_log_row(std::ostream& out, const LogRow& row) {
  out << row.epoch << ',' << row.graph_id << ',' << format_double(row.loss.mod) << ','
      << format_double(row.loss.bce) << ',' << format_double(row.loss.total) << '\n';
}

Trainer::Trainer(std::span<const CorpusEntry> corpus, const TrainConfig& cfg, ModelParams init)
    : corpus_(corpus), cfg_(cfg), params_(std::move(init)) {
  cfg_.validate();
  params_.validate();
  check_corpus();
  adam_ = Adam(params_, cfg_.learning_rate, cfg_.beta1, cfg_.beta2, cfg_.epsilon);
  raw_.reserve(corpus_.size());
  for (const auto& e : corpus_) raw_.push_back(raw_input(e.graph, training_projection(cfg_, params_, e.index), params_));
}

Trainer::Trainer(std::span<const CorpusEntry> corpus, const TrainConfig& cfg, const Checkpoint& ckpt)
    : Trainer(corpus, cfg, ckpt.params) {
  if (ckpt.epoch > cfg_.epochs) throw std::invalid_argument("checkpoint is past the configured epoch count");
  adam_.restore(ckpt.adam_m, ckpt.adam_v, ckpt.step);
  epoch_ = ckpt.epoch;
}

void Trainer::check_corpus() const {
  if (corpus_.empty()) throw std::invalid_argument("training corpus is empty");
  for (const auto& e : corpus_) {
    if (e.graph.node_count() > cfg_.objective.dense_limit) {
      throw std::length_error("corpus graph " + std::to_string(e.index) + " has " +
                              std::to_string(e.graph.node_count()) + " nodes, above the dense limit");
    }
    if (e.graph.edge_count() == 0) throw std::invalid_argument("corpus graph " + std::to_string(e.index) + " has no edges");
    if (e.truth.size() != e.graph.node_count()) {
      throw std::invalid_argument("ground truth of corpus graph " + std::to_string(e.index) + " has the wrong size");
    }
  }
}

std::vector<std::size_t> Trainer::epoch_order() const {
  std::vector<std::size_t> order(corpus_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (cfg_.shuffle) {
    Rng rng(derive_seed(cfg_.seed ^ kShuffleStream, static_cast<std::uint64_t>(epoch_)));
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

void Trainer::run_epoch() {
  if (finished()) return;
  for (const std::size_t i : epoch_order()) {
    const CorpusEntry& e = corpus_[i];
    const GroundTruthPairs truth = build_ground_truth(e.truth);
    GradientResult r = objective_gradients(e.graph, truth, raw_[i], params_, cfg_.objective);
    const LogRow row{epoch_ + 1, e.index, r.loss};
    if (!std::isfinite(r.loss.total) || !all_finite(r.grad)) {
      std::ostringstream msg;
      msg << "non-finite training state at epoch " << row.epoch << ", graph " << e.index << " (N=" << e.graph.node_count()
          << ", M=" << e.graph.edge_count() << "): loss_mod=" << r.loss.mod << " loss_bce=" << r.loss.bce
          << " loss_total=" << r.loss.total << ", max |param|=" << max_abs(params_) << ", step " << adam_.steps();
      throw TrainingDiverged(msg.str());
    }
    adam_.step(params_, r.grad);
    log_.push_back(row);
    if (on_row) on_row(row);
  }
  ++epoch_;
}

void Trainer::run() {
  while (!finished()) {
    run_epoch();
    if (cfg_.checkpoint_every > 0 && epoch_ % cfg_.checkpoint_every == 0) {
      std::filesystem::create_directories(cfg_.checkpoint_dir);
      char name[48];
      std::snprintf(name, sizeof(name), "checkpoint_%04d.txt", epoch_);
      save_checkpoint(cfg_.checkpoint_dir / name, checkpoint());
    }
  }
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint c;
  c.params = params_;
  c.adam_m = adam_.first_moment();
  c.adam_v = adam_.second_moment();
  c.adam_m.projection_seed = c.adam_v.projection_seed = params_.projection_seed;
  c.step = adam_.steps();
  c.epoch = epoch_;
  return c;
}

TrainResult pretrain(std::span<const CorpusEntry> corpus, const TrainConfig& cfg, ModelParams init) {
  Trainer t(corpus, cfg, std::move(init));
  t.run();
  return {t.params(), t.log()};
}

std::vector<double> epoch_mean_loss(std::span<const LogRow> log) {
  std::map<int, std::pair<double, std::size_t>> acc;
  for (const auto& r : log) {
    auto& [sum, n] = acc[r.epoch];
    sum += r.loss.total;
    ++n;
  }
  std::vector<double> out;
  for (const auto& [epoch, s] : acc) out.push_back(s.first / static_cast<double>(s.second));
  return out;
}

}  // namespace cdkit
