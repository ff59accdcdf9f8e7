#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cdkit/graph.hpp"
#include "cdkit/infer.hpp"
#include "cdkit/model.hpp"
#include "cdkit/refine.hpp"

namespace cdkit {

struct BenchGraph {
  std::string id;
  Graph graph;
};

struct BenchOptions {
  /// Lpa or Louvain; None is rejected
  RefinerChoice refiner;
  InferOptions infer;
  /// also report the generalization-only ablation
  bool include_without_refinement = false;
  /// per-run budget in seconds; runs past it are reported out of time
  double time_budget = 600.0;
  /// graphs benchmarked concurrently
  std::size_t workers = 1;
  /// timings are the minimum over this many identical runs
  int repeats = 1;

  void validate() const;
};

struct BenchRow {
  std::string graph;
  std::string method;
  std::size_t communities = 0;
  double modularity = 0.0;
  PhaseTimings timings;
  /// the refiner's own time for baselines, timings.total() otherwise
  double seconds = 0.0;
  bool out_of_time = false;
};

struct AggregateRow {
  std::string method;
  std::size_t graphs = 0;
  double mean_seconds = 0.0;
  double mean_modularity = 0.0;
  /// means of per-graph improvements over the baseline; 0 for the baseline
  double time_improvement_pct = 0.0;
  double modularity_improvement_pct = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<AggregateRow> aggregates;
};

/// Positive when `method` is faster: (baseline - method) / baseline * 100.
double time_improvement_pct(double baseline_seconds, double method_seconds);
/// Signed: (method - baseline) / |baseline| * 100.
double modularity_improvement_pct(double baseline_modularity, double method_modularity);

/// Method labels, e.g. "Louvain", "PRoCD w/ Louvain", "PRoCD w/o Rfn".
std::string baseline_method(RefinerKind kind);
std::string procd_method(RefinerKind kind);
extern const char* const kWithoutRefinementMethod;

/// Per graph: the refiner from scratch, the pipeline with that refiner and
/// optionally the pipeline without refinement. Aggregates compare each
/// method with the baseline over graphs where neither run was out of time.
BenchReport run_bench(std::span<const BenchGraph> graphs, const ModelParams& params, const BenchOptions& opts);

/// Recomputes aggregate rows from per-graph rows.
std::vector<AggregateRow> aggregate(std::span<const BenchRow> rows, const std::string& baseline);

extern const char* const kBenchRowHeader;
extern const char* const kBenchAggregateHeader;
void write_bench_rows(std::ostream& out, std::span<const BenchRow> rows);
void write_bench_aggregates(std::ostream& out, std::span<const AggregateRow> rows);

}  // namespace cdkit
