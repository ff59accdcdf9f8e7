#include "cdkit_cli/config.hpp"

#include <fstream>

namespace cdkit::cli {
namespace {

Json model_block() {
  return Json{{"dim", 64}, {"feat_layers", 2}, {"gnn_layers", 2}, {"bc_layers", 2}};
}

Json ablation_block() {
  return Json{{"modularity_features", true},
              {"encoder", true},
              {"classifier", "temperature"},
              {"naive_temperature", 1.0},
              {"loss_mod", true},
              {"loss_bce", true}};
}

Json refiner_block() {
  return Json{{"refiner", "louvain"}, {"resolution", 1.0}, {"max_levels", 32}, {"max_iter", 100}};
}

void check_keys(const Json& defaults, const Json& given, const std::string& where) {
  if (!given.is_object()) throw ConfigError(where.empty() ? "config must be a JSON object" : where + " must be an object");
  for (const auto& [key, value] : given.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!defaults.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    const Json& d = defaults[key];
    if (d.is_object()) {
      check_keys(d, value, path);
    } else if (!d.is_null() && !value.is_null()) {
      const bool numeric = d.is_number() && value.is_number();
      if (!numeric && d.type() != value.type()) throw ConfigError("config key '" + path + "' has the wrong type");
    }
  }
}

template <class T>
T get(const Json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

IntRange int_range(const Json& v, const char* key) {
  const auto a = get<std::vector<std::int64_t>>(v, key);
  if (a.size() != 2) throw ConfigError(std::string(key) + " must be [lo, hi]");
  return {a[0], a[1]};
}

RealRange real_range(const Json& v, const char* key) {
  const auto a = get<std::vector<double>>(v, key);
  if (a.size() != 2) throw ConfigError(std::string(key) + " must be [lo, hi]");
  return {a[0], a[1]};
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "generate") return Command::Generate;
  if (name == "pretrain") return Command::Pretrain;
  if (name == "infer") return Command::Infer;
  if (name == "eval") return Command::Eval;
  if (name == "bench") return Command::Bench;
  throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Generate:
      return "generate";
    case Command::Pretrain:
      return "pretrain";
    case Command::Infer:
      return "infer";
    case Command::Eval:
      return "eval";
    case Command::Bench:
      return "bench";
  }
  return "unknown";
}

Json default_config(Command c) {
  const GenConfig g;
  const TrainConfig t;
  switch (c) {
    case Command::Generate:
      return Json{{"output", nullptr},
                  {"seed", 0},
                  {"graphs", g.graph_count},
                  {"nodes", {g.nodes.lo, g.nodes.hi}},
                  {"communities", {g.communities.lo, g.communities.hi}},
                  {"gamma", {g.gamma.lo, g.gamma.hi}},
                  {"mu", {g.mu.lo, g.mu.hi}},
                  {"rho", {g.rho.lo, g.rho.hi}},
                  {"deg_min_cap", g.deg_min_cap},
                  {"deg_min_divisor", g.deg_min_divisor},
                  {"deg_max_cap", g.deg_max_cap},
                  {"workers", 1}};
    case Command::Pretrain:
      return Json{{"corpus", nullptr},
                  {"first_graph", 0},
                  {"graph_count", 0},
                  {"output", nullptr},
                  {"log", nullptr},
                  {"resume", nullptr},
                  {"seed", 0},
                  {"epochs", t.epochs},
                  {"learning_rate", t.learning_rate},
                  {"alpha", t.objective.alpha},
                  {"lambda", t.objective.lambda},
                  {"beta1", t.beta1},
                  {"beta2", t.beta2},
                  {"epsilon", t.epsilon},
                  {"shuffle", t.shuffle},
                  {"checkpoint_every", 0},
                  {"checkpoint_dir", nullptr},
                  {"dense_limit", t.objective.dense_limit},
                  {"model", model_block()},
                  {"ablation", ablation_block()}};
    case Command::Infer: {
      Json j{{"graph", nullptr},   {"nodes", nullptr},    {"graph_id", "graph"}, {"model", nullptr}, {"pretrained", true},
             {"model_init", Json{{"seed", 0}, {"model", model_block()}, {"ablation", ablation_block()}}},
             {"output", nullptr},  {"timing", nullptr},   {"n_s", 10000},     {"seed", 0},
             {"workers", 1}};
      j.update(refiner_block());
      return j;
    }
    case Command::Eval:
      return Json{{"graph", nullptr}, {"nodes", nullptr}, {"partition", nullptr}, {"truth", nullptr}, {"resolution", 1.0}};
    case Command::Bench: {
      Json j{{"corpus", nullptr},
             {"first_graph", 0},
             {"graph_count", 0},
             {"graphs", Json::array()},
             {"model", nullptr},
             {"pretrained", true},
             {"model_init", Json{{"seed", 0}, {"model", model_block()}, {"ablation", ablation_block()}}},
             {"output", nullptr},
             {"n_s", 10000},
             {"seed", 0},
             {"workers", 1},
             {"repeats", 1},
             {"time_budget", 600.0},
             {"without_refinement", false}};
      j.update(refiner_block());
      return j;
    }
  }
  return Json::object();
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json resolve_config(Command c, const Json& file, const std::vector<std::string>& overrides) {
  const Json defaults = default_config(c);
  Json cfg = defaults;
  if (!file.is_null()) {
    check_keys(defaults, file, "");
    cfg.merge_patch(file);
  }
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    Json patch = value;
    std::string rest = key;
    std::vector<std::string> parts;
    for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1)) {
      parts.push_back(rest.substr(0, pos));
    }
    parts.push_back(rest);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = Json{{*it, patch}};
    check_keys(defaults, patch, "");
    cfg.merge_patch(patch);
  }
  // merge_patch drops keys patched to null; restore them
  for (const auto& [key, value] : defaults.items()) {
    if (!cfg.contains(key)) cfg[key] = value;
  }
  return cfg;
}

void write_resolved_config(const std::filesystem::path& path, const Json& cfg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << cfg.dump(2) << '\n';
}

GenConfig gen_config(const Json& cfg) {
  GenConfig g;
  g.graph_count = get<std::size_t>(cfg, "graphs");
  g.nodes = int_range(cfg, "nodes");
  g.communities = int_range(cfg, "communities");
  g.gamma = real_range(cfg, "gamma");
  g.mu = real_range(cfg, "mu");
  g.rho = real_range(cfg, "rho");
  g.deg_min_cap = get<std::uint32_t>(cfg, "deg_min_cap");
  g.deg_min_divisor = get<std::uint32_t>(cfg, "deg_min_divisor");
  g.deg_max_cap = get<std::uint32_t>(cfg, "deg_max_cap");
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return g;
}

ModelDims model_dims(const Json& cfg) {
  const Json& m = cfg.at("model");
  ModelDims d;
  d.dim = get<int>(m, "dim");
  d.feat_layers = get<int>(m, "feat_layers");
  d.gnn_layers = get<int>(m, "gnn_layers");
  d.bc_layers = get<int>(m, "bc_layers");
  if (d.dim < 1 || d.feat_layers < 1 || d.gnn_layers < 1 || d.bc_layers < 1) {
    throw ConfigError("model dimensions must be positive");
  }
  return d;
}

ModelVariant model_variant(const Json& cfg) {
  const Json& a = cfg.at("ablation");
  ModelVariant v;
  v.modularity_features = get<bool>(a, "modularity_features");
  v.encoder = get<bool>(a, "encoder");
  const auto classifier = get<std::string>(a, "classifier");
  if (classifier != "temperature" && classifier != "naive") {
    throw ConfigError("ablation.classifier must be \"temperature\" or \"naive\"");
  }
  v.pair_temperature = classifier == "temperature";
  v.naive_temperature = get<double>(a, "naive_temperature");
  if (v.naive_temperature == 0.0) throw ConfigError("ablation.naive_temperature must be non-zero");
  return v;
}

TrainConfig train_config(const Json& cfg) {
  TrainConfig t;
  t.seed = get<std::uint64_t>(cfg, "seed");
  t.epochs = get<int>(cfg, "epochs");
  t.learning_rate = get<double>(cfg, "learning_rate");
  t.objective.alpha = get<double>(cfg, "alpha");
  t.objective.lambda = get<double>(cfg, "lambda");
  t.objective.use_mod = get<bool>(cfg.at("ablation"), "loss_mod");
  t.objective.use_bce = get<bool>(cfg.at("ablation"), "loss_bce");
  t.objective.dense_limit = get<std::size_t>(cfg, "dense_limit");
  t.beta1 = get<double>(cfg, "beta1");
  t.beta2 = get<double>(cfg, "beta2");
  t.epsilon = get<double>(cfg, "epsilon");
  t.shuffle = get<bool>(cfg, "shuffle");
  t.checkpoint_every = get<int>(cfg, "checkpoint_every");
  if (!cfg.at("checkpoint_dir").is_null()) t.checkpoint_dir = get<std::string>(cfg, "checkpoint_dir");
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return t;
}

InferOptions infer_options(const Json& cfg) {
  InferOptions o;
  o.n_s = get<std::size_t>(cfg, "n_s");
  o.seed = get<std::uint64_t>(cfg, "seed");
  o.workers = get<std::size_t>(cfg, "workers");
  return o;
}

RefinerChoice refiner_choice(const Json& cfg) {
  RefinerChoice r;
  try {
    r.kind = parse_refiner(get<std::string>(cfg, "refiner"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto seed = get<std::uint64_t>(cfg, "seed");
  r.louvain.resolution = get<double>(cfg, "resolution");
  r.louvain.max_levels = get<int>(cfg, "max_levels");
  r.louvain.seed = derive_seed(seed, 2);
  r.lpa.max_iter = get<int>(cfg, "max_iter");
  r.lpa.seed = derive_seed(seed, 3);
  if (!(r.louvain.resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (r.louvain.max_levels < 1 || r.lpa.max_iter < 1) throw ConfigError("max_levels and max_iter must be positive");
  return r;
}

BenchOptions bench_options(const Json& cfg) {
  BenchOptions b;
  b.refiner = refiner_choice(cfg);
  b.infer = infer_options(cfg);
  b.include_without_refinement = get<bool>(cfg, "without_refinement");
  b.time_budget = get<double>(cfg, "time_budget");
  b.workers = get<std::size_t>(cfg, "workers");
  b.repeats = get<int>(cfg, "repeats");
  // scoring stays single-threaded when graphs already run in parallel
  b.infer.workers = 1;
  try {
    b.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return b;
}

ModelParams inference_model(const Json& cfg) {
  if (get<bool>(cfg, "pretrained")) {
    if (cfg.at("model").is_null()) throw ConfigError("'model' is required unless pretrained is false");
    return load_model(get<std::string>(cfg, "model"));
  }
  const Json& init = cfg.at("model_init");
  return ModelParams::initialize(model_dims(init), model_variant(init), get<std::uint64_t>(init, "seed"));
}

}  // namespace cdkit::cli
