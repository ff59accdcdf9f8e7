#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cdkit/bench.hpp"
#include "cdkit/infer.hpp"
#include "cdkit/model.hpp"
#include "cdkit/pretrain.hpp"
#include "cdkit/refine.hpp"
#include "cdkit/synthgen.hpp"

namespace cdkit::cli {

using Json = nlohmann::ordered_json;

enum class Command { Generate, Pretrain, Infer, Eval, Bench };

Command parse_command(std::string_view name);
std::string command_name(Command c);

/// Every key a subcommand understands, with its default value. Keys whose
/// default is null are optional paths.
Json default_config(Command c);

/// Thrown for unknown keys, wrong value types and failed validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);

/// defaults <- file <- "key.sub=value" overrides, where each value is parsed
/// as JSON when possible and taken as a string otherwise. Unknown keys are
/// rejected.
Json resolve_config(Command c, const Json& file, const std::vector<std::string>& overrides);

void write_resolved_config(const std::filesystem::path& path, const Json& cfg);

GenConfig gen_config(const Json& cfg);
TrainConfig train_config(const Json& cfg);
ModelDims model_dims(const Json& cfg);
/// From the "ablation" block: features, encoder, classifier switches.
ModelVariant model_variant(const Json& cfg);
InferOptions infer_options(const Json& cfg);
RefinerChoice refiner_choice(const Json& cfg);
BenchOptions bench_options(const Json& cfg);

/// Model for inference: loaded from "model", or freshly initialized from
/// "model_init" when "pretrained" is false (the untrained ablation).
ModelParams inference_model(const Json& cfg);

}  // namespace cdkit::cli
