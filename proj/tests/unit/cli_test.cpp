#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cdkit/corpus.hpp"
#include "cdkit/edge_list.hpp"
#include "cdkit/model_io.hpp"
#include "cdkit_cli/commands.hpp"

namespace cdkit::cli {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(CDKIT_TEST_TMP) / "cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string run(Command c, const std::vector<std::string>& overrides, const Json& file = Json()) {
  std::ostringstream out;
  EXPECT_EQ(run_command(c, resolve_config(c, file, overrides), out), 0);
  return out.str();
}

// one small corpus and model shared by the end-to-end cases
class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fresh_dir("pipeline");
    run(Command::Generate, {"output=" + (root_ / "corpus").string(), "seed=5", "graphs=4", "nodes=[80,120]",
                            "communities=[2,6]"});
    run(Command::Pretrain, {"corpus=" + (root_ / "corpus").string(), "output=" + (root_ / "model.txt").string(),
                            "epochs=2", "learning_rate=0.01", "model.dim=8", "seed=1"});
  }
  static fs::path root_;
};
fs::path CliPipeline::root_;

TEST(Config, DefaultsAndOverrides) {
  const Json cfg = resolve_config(Command::Pretrain, Json(), {"epochs=7", "model.dim=16", "ablation.loss_bce=false"});
  EXPECT_EQ(cfg["epochs"], 7);
  EXPECT_EQ(cfg["model"]["dim"], 16);
  EXPECT_EQ(cfg["model"]["gnn_layers"], 2);
  EXPECT_EQ(cfg["ablation"]["loss_bce"], false);
  EXPECT_EQ(cfg["learning_rate"], 1e-4);
  EXPECT_TRUE(cfg["corpus"].is_null());
  EXPECT_EQ(train_config(cfg).objective.use_bce, false);
  EXPECT_EQ(model_dims(cfg).dim, 16);
}

TEST(Config, FileThenOverridesWin) {
  const Json file = Json::parse(R"({"refiner": "lpa", "n_s": 5, "model_init": {"model": {"dim": 12}}})");
  const Json cfg = resolve_config(Command::Infer, file, {"n_s=9", "output=out/p.txt"});
  EXPECT_EQ(cfg["refiner"], "lpa");
  EXPECT_EQ(cfg["n_s"], 9);
  EXPECT_EQ(cfg["output"], "out/p.txt");
  EXPECT_EQ(cfg["model_init"]["model"]["dim"], 12);
  EXPECT_EQ(cfg["model_init"]["model"]["bc_layers"], 2);
  EXPECT_EQ(refiner_choice(cfg).kind, RefinerKind::Lpa);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(resolve_config(Command::Pretrain, Json(), {"epoch=3"}), ConfigError);
  EXPECT_THROW(resolve_config(Command::Pretrain, Json::parse(R"({"model": {"depth": 3}})"), {}), ConfigError);
  EXPECT_THROW(resolve_config(Command::Pretrain, Json(), {"epochs=many"}), ConfigError);
  EXPECT_THROW(resolve_config(Command::Infer, Json(), {"noequals"}), ConfigError);
  EXPECT_THROW(train_config(resolve_config(Command::Pretrain, Json(), {"epochs=0"})), ConfigError);
  EXPECT_THROW(refiner_choice(resolve_config(Command::Infer, Json(), {"refiner=infomap"})), ConfigError);
  EXPECT_THROW(model_variant(resolve_config(Command::Pretrain, Json(), {"ablation.classifier=softmax"})),
               ConfigError);
  EXPECT_THROW(bench_options(resolve_config(Command::Bench, Json(), {"refiner=none"})), ConfigError);
  EXPECT_THROW(parse_command("train"), ConfigError);
}

TEST(Config, AblationSwitchesMapOntoVariant) {
  const Json cfg = resolve_config(
      Command::Pretrain, Json(),
      {"ablation.modularity_features=false", "ablation.encoder=false", "ablation.classifier=naive"});
  const ModelVariant v = model_variant(cfg);
  EXPECT_FALSE(v.modularity_features);
  EXPECT_FALSE(v.encoder);
  EXPECT_FALSE(v.pair_temperature);
}

TEST(Config, CommandNamesRoundTrip) {
  for (Command c : {Command::Generate, Command::Pretrain, Command::Infer, Command::Eval, Command::Bench}) {
    EXPECT_EQ(parse_command(command_name(c)), c);
    EXPECT_TRUE(default_config(c).is_object());
  }
}

TEST_F(CliPipeline, GenerateWritesReadableCorpus) {
  const auto corpus = read_corpus(root_ / "corpus");
  ASSERT_EQ(corpus.size(), 4u);
  for (const auto& e : corpus) {
    EXPECT_GE(e.graph.node_count(), 80u);
    EXPECT_LE(e.graph.node_count(), 120u);
  }
  EXPECT_TRUE(fs::exists(root_ / "corpus" / "config.json"));
  // same seed, same corpus
  const fs::path again = fresh_dir("corpus_again");
  run(Command::Generate, {"output=" + again.string(), "seed=5", "graphs=4", "nodes=[80,120]", "communities=[2,6]"});
  EXPECT_EQ(slurp(again / "manifest.csv"), slurp(root_ / "corpus" / "manifest.csv"));
}

TEST_F(CliPipeline, PretrainWritesModelLogAndConfig) {
  const ModelParams p = load_model(root_ / "model.txt");
  EXPECT_EQ(p.dims.dim, 8);
  const std::string log = slurp(root_ / "model.txt.log.csv");
  EXPECT_EQ(log.rfind(std::string(kTrainLogHeader) + "\n", 0), 0u);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 1 + 2 * 4);
  EXPECT_TRUE(fs::exists(root_ / "model.txt.config.json"));
}

TEST_F(CliPipeline, ResumeMatchesUninterruptedRun) {
  const fs::path dir = fresh_dir("resume");
  const std::string corpus = "corpus=" + (root_ / "corpus").string();
  const std::vector<std::string> common{corpus, "learning_rate=0.01", "model.dim=8", "seed=3", "shuffle=true"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> all = common;
    all.insert(all.end(), extra.begin(), extra.end());
    return all;
  };
  run(Command::Pretrain, with({"epochs=3", "output=" + (dir / "full.txt").string()}));
  run(Command::Pretrain, with({"epochs=1", "output=" + (dir / "first.txt").string(), "checkpoint_every=1",
                               "checkpoint_dir=" + (dir / "ckpt").string()}));
  ASSERT_TRUE(fs::exists(dir / "ckpt" / "checkpoint_0001.txt"));
  run(Command::Pretrain, with({"epochs=3", "output=" + (dir / "resumed.txt").string(),
                               "resume=" + (dir / "ckpt" / "checkpoint_0001.txt").string()}));
  EXPECT_EQ(slurp(dir / "resumed.txt"), slurp(dir / "full.txt"));
  EXPECT_THROW(run_command(Command::Pretrain,
                           resolve_config(Command::Pretrain, Json(),
                                          with({"epochs=3", "model.dim=4", "output=" + (dir / "bad.txt").string(),
                                                "resume=" + (dir / "ckpt" / "checkpoint_0001.txt").string()})),
                           std::cout),
               ConfigError);
}

TEST_F(CliPipeline, InferAndEvalAreDeterministic) {
  const auto corpus = read_corpus(root_ / "corpus");
  const std::string graph = (root_ / "corpus" / "graph_00000.edges").string();
  const std::string nodes = "nodes=" + std::to_string(corpus[0].graph.node_count());
  const std::string model = "model=" + (root_ / "model.txt").string();
  for (const std::string refiner : {"none", "lpa", "louvain"}) {
    const fs::path a = root_ / ("a_" + refiner + ".txt"), b = root_ / ("b_" + refiner + ".txt");
    run(Command::Infer, {"graph=" + graph, nodes, model, "refiner=" + refiner, "n_s=500", "output=" + a.string()});
    run(Command::Infer, {"graph=" + graph, nodes, model, "refiner=" + refiner, "n_s=500", "output=" + b.string()});
    EXPECT_EQ(slurp(a), slurp(b)) << refiner;
    const std::string timing = slurp(fs::path(a.string() + ".timing.csv"));
    EXPECT_EQ(timing.rfind(std::string(kTimingHeader) + "\ngraph,", 0), 0u) << timing;
    const std::string report = run(Command::Eval, {"graph=" + graph, nodes, "partition=" + a.string(),
                                                   "truth=" + (root_ / "corpus" / "graph_00000.truth").string()});
    EXPECT_NE(report.find("modularity "), std::string::npos);
    EXPECT_NE(report.find("agreement "), std::string::npos);
  }
}

TEST_F(CliPipeline, BenchWritesReports) {
  const fs::path out = root_ / "bench";
  const std::string text = run(Command::Bench, {"corpus=" + (root_ / "corpus").string(), "first_graph=2",
                                                "model=" + (root_ / "model.txt").string(), "output=" + out.string(),
                                                "n_s=300", "refiner=lpa", "without_refinement=true"});
  const std::string rows = slurp(out / "rows.csv");
  EXPECT_EQ(rows.rfind(std::string(kBenchRowHeader) + "\n", 0), 0u);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 1 + 2 * 3);
  EXPECT_NE(slurp(out / "aggregates.csv").find("PRoCD w/ LPA"), std::string::npos);
  EXPECT_NE(text.find("PRoCD w/o Rfn"), std::string::npos);
}

TEST_F(CliPipeline, MissingInputsAreConfigErrors) {
  std::ostringstream out;
  EXPECT_THROW(run_command(Command::Infer, resolve_config(Command::Infer, Json(), {}), out), ConfigError);
  EXPECT_THROW(run_command(Command::Infer,
                           resolve_config(Command::Infer, Json(), {"graph=/nonexistent.edges", "output=x.txt"}), out),
               ConfigError);
  EXPECT_THROW(run_command(Command::Bench,
                           resolve_config(Command::Bench, Json(),
                                          {"output=" + (root_ / "b2").string(), "pretrained=false"}),
                           out),
               ConfigError);
}

}  // namespace
}  // namespace cdkit::cli
