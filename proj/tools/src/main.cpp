#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdkit_cli/commands.hpp"

namespace {

// Named flags are shorthands for --set key=value.
const std::map<std::string, std::vector<std::pair<std::string, std::string>>> kFlags = {
    {"generate", {{"output", "corpus directory"}, {"seed", "master seed"}, {"graphs", "number of graphs"}}},
    {"pretrain",
     {{"corpus", "corpus directory"},
      {"output", "model file"},
      {"resume", "checkpoint to continue from"},
      {"seed", "training seed"},
      {"epochs", "number of epochs"}}},
    {"infer",
     {{"graph", "edge list"},
      {"model", "model file"},
      {"output", "partition file"},
      {"refiner", "none, lpa or louvain"},
      {"seed", "inference seed"}}},
    {"eval", {{"graph", "edge list"}, {"partition", "partition file"}, {"truth", "ground-truth partition"}}},
    {"bench",
     {{"corpus", "corpus directory"},
      {"model", "model file"},
      {"output", "report directory"},
      {"refiner", "lpa or louvain"}}},
};

const std::map<std::string, std::string> kDescriptions = {
    {"generate", "generate a synthetic pre-training corpus"},
    {"pretrain", "pre-train a model on a corpus"},
    {"infer", "partition a graph with a model and a refiner"},
    {"eval", "report modularity, K and agreement with a ground truth"},
    {"bench", "compare refiners with and without model initialization"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"community detection with a pre-trained pair classifier"};
  app.require_subcommand(1);
  struct Sub {
    CLI::App* app;
    std::string config;
    std::vector<std::string> sets;
    bool print_config = false;
    std::map<std::string, std::string> flags;
  };
  std::map<std::string, Sub> subs;
  for (const auto& [name, desc] : kDescriptions) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, desc);
    s.app->add_option("-c,--config", s.config, "JSON config file")->check(CLI::ExistingFile);
    s.app->add_option("--set", s.sets, "override a config key, e.g. --set ablation.encoder=false");
    s.app->add_flag("--print-config", s.print_config, "print the resolved config and exit");
    for (const auto& [key, help] : kFlags.at(name)) s.app->add_option("--" + key, s.flags[key], help);
  }
  CLI11_PARSE(app, argc, argv);

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    try {
      const auto command = cdkit::cli::parse_command(name);
      const cdkit::cli::Json file = s.config.empty() ? cdkit::cli::Json() : cdkit::cli::read_json_file(s.config);
      std::vector<std::string> overrides;
      for (const auto& [key, value] : s.flags) {
        if (s.app->count("--" + key)) overrides.push_back(key + "=" + value);
      }
      overrides.insert(overrides.end(), s.sets.begin(), s.sets.end());
      const auto cfg = cdkit::cli::resolve_config(command, file, overrides);
      if (s.print_config) {
        std::cout << cfg.dump(2) << '\n';
        return 0;
      }
      return cdkit::cli::run_command(command, cfg, std::cout);
    } catch (const std::exception& e) {
      std::cerr << "cdkit " << name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 1;
}
