#include "cdkit_cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "cdkit/corpus.hpp"
#include "cdkit/edge_list.hpp"
#include "cdkit/format.hpp"
#include "cdkit/metrics.hpp"
#include "cdkit/modularity.hpp"
#include "cdkit/rng.hpp"

namespace cdkit::cli {

const char* const kTimingHeader = "graph_id,feat_s,ffp_s,init_s,rfn_s,modularity,K";

namespace fs = std::filesystem;

namespace {

std::string required_path(const Json& cfg, const char* key) {
  const Json& v = cfg.at(key);
  if (v.is_null() || !v.is_string() || v.get<std::string>().empty()) {
    throw ConfigError(std::string("'") + key + "' is required");
  }
  return v.get<std::string>();
}

void require_exists(const fs::path& p, const char* key) {
  if (!fs::exists(p)) throw ConfigError(std::string("'") + key + "' does not exist: " + p.string());
}

fs::path sibling(const fs::path& p, const std::string& suffix) { return fs::path(p.string() + suffix); }

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::out) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, mode);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::vector<CorpusEntry> corpus_slice(const Json& cfg) {
  const fs::path dir = required_path(cfg, "corpus");
  require_exists(dir, "corpus");
  auto all = read_corpus(dir);
  const auto first = cfg.at("first_graph").get<std::size_t>();
  auto count = cfg.at("graph_count").get<std::size_t>();
  if (first > all.size()) throw ConfigError("first_graph is past the end of the corpus");
  if (count == 0) count = all.size() - first;
  if (first + count > all.size()) throw ConfigError("graph_count runs past the end of the corpus");
  return {std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(first)),
          std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(first + count))};
}

// Edge list in original ids, or dense ids in [0, nodes) when "nodes" is set
// (keeps isolated nodes of corpus graphs).
LoadedGraph load_graph(const Json& cfg, const fs::path& path) {
  if (cfg.at("nodes").is_null()) return load_edge_list(path);
  LoadedGraph g;
  g.graph = load_dense_edge_list(path, cfg.at("nodes").get<std::size_t>());
  return g;
}

ModelParams training_init(const Json& cfg) {
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  return ModelParams::initialize(model_dims(cfg), model_variant(cfg), derive_seed(seed, 1));
}

}  // namespace

int cmd_generate(const Json& cfg, std::ostream& out) {
  const fs::path dir = required_path(cfg, "output");
  const GenConfig gc = gen_config(cfg);
  const auto entries = generate_corpus(gc, cfg.at("seed").get<std::uint64_t>(), cfg.at("workers").get<std::size_t>());
  write_corpus(dir, entries);
  write_resolved_config(dir / "config.json", cfg);
  print_corpus_stats(out, corpus_stats(entries));
  return 0;
}

int cmd_pretrain(const Json& cfg, std::ostream& out) {
  const fs::path model_path = required_path(cfg, "output");
  const fs::path log_path = cfg.at("log").is_null() ? sibling(model_path, ".log.csv") : fs::path(cfg.at("log").get<std::string>());
  const TrainConfig tc = train_config(cfg);
  const auto corpus = corpus_slice(cfg);

  const bool resume = !cfg.at("resume").is_null();
  std::optional<Trainer> trainer;
  if (resume) {
    const fs::path ckpt_path = cfg.at("resume").get<std::string>();
    require_exists(ckpt_path, "resume");
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    if (ckpt.params.dims != model_dims(cfg) || ckpt.params.variant != model_variant(cfg)) {
      throw ConfigError("checkpoint model shape or variant differs from the config");
    }
    trainer.emplace(corpus, tc, ckpt);
  } else {
    trainer.emplace(corpus, tc, training_init(cfg));
  }

  const bool append = resume && fs::exists(log_path) && fs::file_size(log_path) > 0;
  auto log = open_out(log_path, append ? std::ios::app : std::ios::out);
  if (!append) log << kTrainLogHeader << '\n';
  trainer->on_row = [&log](const LogRow& row) {
    write_log_row(log, row);
    log.flush();
  };
  const int start = trainer->epochs_done() + 1;
  while (!trainer->finished()) {
    trainer->run_epoch();
    const int e = trainer->epochs_done();
    const auto means = epoch_mean_loss(trainer->log());
    out << "epoch " << e << "/" << tc.epochs << "  mean loss_total " << format_double(means.back()) << '\n';
    if (tc.checkpoint_every > 0 && e % tc.checkpoint_every == 0) {
      fs::create_directories(tc.checkpoint_dir);
      char name[48];
      std::snprintf(name, sizeof(name), "checkpoint_%04d.txt", e);
      save_checkpoint(tc.checkpoint_dir / name, trainer->checkpoint());
    }
  }
  if (start > tc.epochs) out << "checkpoint already at epoch " << tc.epochs << '\n';
  if (model_path.has_parent_path()) fs::create_directories(model_path.parent_path());
  save_model(model_path, trainer->params());
  write_resolved_config(sibling(model_path, ".config.json"), cfg);
  out << "wrote " << model_path.string() << " and " << log_path.string() << '\n';
  return 0;
}

int cmd_infer(const Json& cfg, std::ostream& out) {
  const fs::path graph_path = required_path(cfg, "graph");
  const fs::path part_path = required_path(cfg, "output");
  require_exists(graph_path, "graph");
  const fs::path timing_path =
      cfg.at("timing").is_null() ? sibling(part_path, ".timing.csv") : fs::path(cfg.at("timing").get<std::string>());
  const ModelParams params = inference_model(cfg);
  const InferOptions io = infer_options(cfg);
  const RefinerChoice rc = refiner_choice(cfg);
  const LoadedGraph loaded = load_graph(cfg, graph_path);
  if (loaded.self_loops_dropped || loaded.duplicates_dropped) {
    out << "warning: dropped " << loaded.self_loops_dropped << " self loops and " << loaded.duplicates_dropped
        << " duplicate edges\n";
  }
  const EndToEndResult r = end_to_end(loaded.graph, params, io, rc);

  auto part = open_out(part_path);
  write_partition(part, r.partition, loaded.original_ids);
  auto timing = open_out(timing_path);
  timing << kTimingHeader << '\n'
         << cfg.at("graph_id").get<std::string>() << ',' << format_double(r.timings.feat) << ','
         << format_double(r.timings.ffp) << ',' << format_double(r.timings.init) << ',' << format_double(r.timings.rfn)
         << ',' << format_double(r.modularity) << ',' << r.partition.community_count() << '\n';
  write_resolved_config(sibling(part_path, ".config.json"), cfg);
  out << "N " << loaded.graph.node_count() << "  M " << loaded.graph.edge_count() << '\n'
      << "initial K " << r.initial.community_count() << "  modularity " << format_double(r.initial_modularity) << '\n'
      << "refiner " << refiner_name(rc.kind) << "  K " << r.partition.community_count() << "  modularity "
      << format_double(r.modularity) << '\n'
      << "feat " << format_double(r.timings.feat) << " s  ffp " << format_double(r.timings.ffp) << " s  init "
      << format_double(r.timings.init) << " s  rfn " << format_double(r.timings.rfn) << " s\n";
  return 0;
}

int cmd_eval(const Json& cfg, std::ostream& out) {
  const fs::path graph_path = required_path(cfg, "graph");
  const fs::path part_path = required_path(cfg, "partition");
  require_exists(graph_path, "graph");
  require_exists(part_path, "partition");
  const LoadedGraph loaded = load_graph(cfg, graph_path);
  const std::size_t n = loaded.graph.node_count();
  const Partition p = read_partition(part_path, n, loaded.original_ids);
  out << "modularity " << format_double(modularity(loaded.graph, p, cfg.at("resolution").get<double>())) << '\n'
      << "K " << p.community_count() << '\n';
  if (!cfg.at("truth").is_null()) {
    const fs::path truth_path = cfg.at("truth").get<std::string>();
    require_exists(truth_path, "truth");
    const Partition t = read_partition(truth_path, n, loaded.original_ids);
    out << "agreement " << format_double(pairwise_agreement(p, t)) << '\n';
  }
  return 0;
}

int cmd_bench(const Json& cfg, std::ostream& out) {
  const fs::path dir = required_path(cfg, "output");
  const BenchOptions bo = bench_options(cfg);
  const ModelParams params = inference_model(cfg);
  std::vector<BenchGraph> graphs;
  if (!cfg.at("corpus").is_null()) {
    for (auto& e : corpus_slice(cfg)) {
      char id[32];
      std::snprintf(id, sizeof(id), "graph_%05zu", e.index);
      graphs.push_back({id, std::move(e.graph)});
    }
  }
  for (const auto& p : cfg.at("graphs")) {
    const fs::path path = p.get<std::string>();
    require_exists(path, "graphs");
    graphs.push_back({path.stem().string(), load_edge_list(path).graph});
  }
  if (graphs.empty()) throw ConfigError("bench needs 'corpus' or 'graphs'");
  const BenchReport report = run_bench(graphs, params, bo);
  fs::create_directories(dir);
  auto rows = open_out(dir / "rows.csv");
  write_bench_rows(rows, report.rows);
  auto agg = open_out(dir / "aggregates.csv");
  write_bench_aggregates(agg, report.aggregates);
  write_resolved_config(dir / "config.json", cfg);
  char line[256];
  std::snprintf(line, sizeof(line), "%-20s %6s %12s %12s %10s %10s\n", "method", "graphs", "mean_s", "mean_mod",
                "time%", "mod%");
  out << line;
  for (const auto& a : report.aggregates) {
    std::snprintf(line, sizeof(line), "%-20s %6zu %12.4g %12.4f %+10.1f %+10.1f\n", a.method.c_str(), a.graphs,
                  a.mean_seconds, a.mean_modularity, a.time_improvement_pct, a.modularity_improvement_pct);
    out << line;
  }
  return 0;
}

int run_command(Command c, const Json& cfg, std::ostream& out) {
  switch (c) {
    case Command::Generate:
      return cmd_generate(cfg, out);
    case Command::Pretrain:
      return cmd_pretrain(cfg, out);
    case Command::Infer:
      return cmd_infer(cfg, out);
    case Command::Eval:
      return cmd_eval(cfg, out);
    case Command::Bench:
      return cmd_bench(cfg, out);
  }
  return 2;
}

}  // namespace cdkit::cli
