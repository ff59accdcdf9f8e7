#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "cdkit/backprop.hpp"
#include "cdkit/corpus.hpp"
#include "cdkit/model.hpp"
#include "cdkit/model_io.hpp"

namespace cdkit {

struct TrainConfig {
  Objective objective;
  int epochs = 100;
  double learning_rate = 1e-4;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// visit graphs in a fresh seeded order each epoch instead of index order
  bool shuffle = false;
  /// write a checkpoint every k completed epochs; 0 disables
  int checkpoint_every = 0;
  std::filesystem::path checkpoint_dir;

  void validate() const;
};

/// Projection used for corpus graph `graph_index`; identical in every epoch.
ProjectionSpec training_projection(const TrainConfig& cfg, const ModelParams& params, std::size_t graph_index);

class Adam {
 public:
  Adam() = default;
  Adam(const ModelParams& like, double lr, double beta1, double beta2, double eps);

  void step(ModelParams& params, const ModelParams& grad);

  std::uint64_t steps() const noexcept { return t_; }
  const ModelParams& first_moment() const noexcept { return m_; }
  const ModelParams& second_moment() const noexcept { return v_; }
  void restore(ModelParams m, ModelParams v, std::uint64_t steps);

 private:
  double lr_ = 0.0, beta1_ = 0.0, beta2_ = 0.0, eps_ = 0.0;
  ModelParams m_, v_;
  std::uint64_t t_ = 0;
};

struct LogRow {
  int epoch = 0;
  std::size_t graph_id = 0;
  LossTerms loss;
};

extern const char* const kTrainLogHeader;
void write_log_row(std::ostream& out, const LogRow& row);

/// Thrown when a loss or gradient is not finite; what() names the epoch,
/// graph, loss terms and the largest parameter magnitude.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Offline pre-training: one optimizer step per graph, epochs over a fixed
/// corpus. Features of every graph are computed once and reused.
class Trainer {
 public:
  Trainer(std::span<const CorpusEntry> corpus, const TrainConfig& cfg, ModelParams init);
  /// Continues from a checkpoint; the end result is bit identical to an
  /// uninterrupted run with the same corpus and config.
  Trainer(std::span<const CorpusEntry> corpus, const TrainConfig& cfg, const Checkpoint& ckpt);

  void run_epoch();
  /// Runs the remaining epochs, writing checkpoints when configured.
  void run();

  int epochs_done() const noexcept { return epoch_; }
  bool finished() const noexcept { return epoch_ >= cfg_.epochs; }
  const ModelParams& params() const noexcept { return params_; }
  const std::vector<LogRow>& log() const noexcept { return log_; }
  Checkpoint checkpoint() const;

  /// Called after every optimizer step.
  std::function<void(const LogRow&)> on_row;

 private:
  void check_corpus() const;
  std::vector<std::size_t> epoch_order() const;

  std::span<const CorpusEntry> corpus_;
  TrainConfig cfg_;
  ModelParams params_;
  Adam adam_;
  int epoch_ = 0;
  std::vector<Matrix> raw_;
  std::vector<LogRow> log_;
};

struct TrainResult {
  ModelParams params;
  std::vector<LogRow> log;
};

TrainResult pretrain(std::span<const CorpusEntry> corpus, const TrainConfig& cfg, ModelParams init);

/// Mean total loss of each epoch, in epoch order.
std::vector<double> epoch_mean_loss(std::span<const LogRow> log);

}  // namespace cdkit
