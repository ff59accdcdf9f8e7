#include "cdkit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "cdkit/format.hpp"
#include "cdkit/modularity.hpp"
#include "cdkit/timing.hpp"

namespace cdkit {

const char* const kWithoutRefinementMethod = "PRoCD w/o Rfn";
const char* const kBenchRowHeader = "graph,method,K,modularity,feat_s,ffp_s,init_s,rfn_s,seconds,oot";
const char* const kBenchAggregateHeader = "method,graphs,mean_seconds,mean_modularity,time_improve_pct,mod_improve_pct";

namespace {

std::string display_name(RefinerKind kind) {
  switch (kind) {
    case RefinerKind::Lpa:
      return "LPA";
    case RefinerKind::Louvain:
      return "Louvain";
    case RefinerKind::None:
      break;
  }
  throw std::invalid_argument("benchmarks need a refiner");
}

BenchRow out_of_time_row(const std::string& graph, const std::string& method, double budget) {
  BenchRow row;
  row.graph = graph;
  row.method = method;
  row.modularity = std::numeric_limits<double>::quiet_NaN();
  row.seconds = budget;
  row.out_of_time = true;
  return row;
}

RefinerChoice with_deadline(RefinerChoice choice, double budget) {
  choice.lpa.deadline = Deadline::after(budget);
  choice.louvain.deadline = Deadline::after(budget);
  return choice;
}

std::vector<BenchRow> bench_graph(const BenchGraph& bg, const ModelParams& params, const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  const std::string base = baseline_method(opts.refiner.kind);
  const std::string ours = procd_method(opts.refiner.kind);

  BenchRow b;
  try {
    for (int rep = 0; rep < opts.repeats; ++rep) {
      const RefineResult r = refine_from_scratch(bg.graph, with_deadline(opts.refiner, opts.time_budget));
      if (rep == 0 || r.seconds < b.seconds) b.seconds = r.seconds;
      b.communities = r.partition.community_count();
      b.modularity = r.modularity;
    }
    b.graph = bg.id;
    b.method = base;
    b.timings.rfn = b.seconds;
  } catch (const OutOfTime&) {
    b = out_of_time_row(bg.id, base, opts.time_budget);
  }
  rows.push_back(b);

  BenchRow p;
  BenchRow plain;
  try {
    for (int rep = 0; rep < opts.repeats; ++rep) {
      const EndToEndResult r = end_to_end(bg.graph, params, opts.infer, with_deadline(opts.refiner, opts.time_budget));
      const auto keep_min = [rep](double& slot, double v) { slot = rep == 0 ? v : std::min(slot, v); };
      keep_min(p.timings.feat, r.timings.feat);
      keep_min(p.timings.ffp, r.timings.ffp);
      keep_min(p.timings.init, r.timings.init);
      keep_min(p.timings.rfn, r.timings.rfn);
      p.communities = r.partition.community_count();
      p.modularity = r.modularity;
      plain.communities = r.initial.community_count();
      plain.modularity = r.initial_modularity;
    }
    p.graph = bg.id;
    p.method = ours;
    p.seconds = p.timings.total();
  } catch (const OutOfTime&) {
    p = out_of_time_row(bg.id, ours, opts.time_budget);
  }
  rows.push_back(p);

  if (opts.include_without_refinement && !p.out_of_time) {
    plain.graph = bg.id;
    plain.method = kWithoutRefinementMethod;
    plain.timings = p.timings;
    plain.timings.rfn = 0.0;
    plain.seconds = plain.timings.total();
    rows.push_back(plain);
  }
  return rows;
}

}  // namespace

void BenchOptions::validate() const {
  if (refiner.kind == RefinerKind::None) throw std::invalid_argument("benchmarks need the lpa or louvain refiner");
  if (!(time_budget > 0.0)) throw std::invalid_argument("time budget must be positive");
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
}

double time_improvement_pct(double baseline_seconds, double method_seconds) {
  return (baseline_seconds - method_seconds) / baseline_seconds * 100.0;
}

double modularity_improvement_pct(double baseline_modularity, double method_modularity) {
  return (method_modularity - baseline_modularity) / std::abs(baseline_modularity) * 100.0;
}

std::string baseline_method(RefinerKind kind) { return display_name(kind); }
std::string procd_method(RefinerKind kind) { return "PRoCD w/ " + display_name(kind); }

BenchReport run_bench(std::span<const BenchGraph> graphs, const ModelParams& params, const BenchOptions& opts) {
  opts.validate();
  std::vector<std::vector<BenchRow>> per_graph(graphs.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(opts.workers, graphs.size()));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < graphs.size(); i += workers) per_graph[i] = bench_graph(graphs[i], params, opts);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  BenchReport report;
  for (auto& rows : per_graph) report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  report.aggregates = aggregate(report.rows, baseline_method(opts.refiner.kind));
  return report;
}

std::vector<AggregateRow> aggregate(std::span<const BenchRow> rows, const std::string& baseline) {
  std::map<std::string, const BenchRow*> base_of;
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    if (r.method == baseline) base_of[r.graph] = &r;
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  std::vector<AggregateRow> out;
  for (const auto& m : methods) {
    AggregateRow a;
    a.method = m;
    for (const auto& r : rows) {
      if (r.method != m || r.out_of_time) continue;
      const auto it = base_of.find(r.graph);
      if (it == base_of.end() || it->second->out_of_time) continue;
      ++a.graphs;
      a.mean_seconds += r.seconds;
      a.mean_modularity += r.modularity;
      a.time_improvement_pct += time_improvement_pct(it->second->seconds, r.seconds);
      a.modularity_improvement_pct += modularity_improvement_pct(it->second->modularity, r.modularity);
    }
    if (a.graphs) {
      const double n = static_cast<double>(a.graphs);
      a.mean_seconds /= n;
      a.mean_modularity /= n;
      a.time_improvement_pct /= n;
      a.modularity_improvement_pct /= n;
    }
    out.push_back(a);
  }
  return out;
}

void write_bench_rows(std::ostream& out, std::span<const BenchRow> rows) {
  out << kBenchRowHeader << '\n';
  for (const auto& r : rows) {
    out << r.graph << ',' << r.method << ',' << r.communities << ',' << format_double(r.modularity) << ','
        << format_double(r.timings.feat) << ',' << format_double(r.timings.ffp) << ','
        << format_double(r.timings.init) << ',' << format_double(r.timings.rfn) << ',' << format_double(r.seconds)
        << ',' << (r.out_of_time ? 1 : 0) << '\n';
  }
}

void write_bench_aggregates(std::ostream& out, std::span<const AggregateRow> rows) {
  out << kBenchAggregateHeader << '\n';
  for (const auto& a : rows) {
    out << a.method << ',' << a.graphs << ',' << format_double(a.mean_seconds) << ','
        << format_double(a.mean_modularity) << ',' << format_double(a.time_improvement_pct) << ','
        << format_double(a.modularity_improvement_pct) << '\n';
  }
}

}  // namespace cdkit
