#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cdkit/model.hpp"

namespace cdkit {

/// Versioned text container: a header line "<kind> <version>", scalar
/// "key value" lines, then named row-major tensors, each introduced by
/// "tensor <name> <rows> <cols>" and followed by one line per row.  Doubles
/// use shortest round-trip formatting, so write/read is bit exact.
struct TensorDocument {
  std::string kind;
  int version = 1;
  std::vector<std::pair<std::string, std::string>> scalars;
  std::vector<std::pair<std::string, Matrix>> tensors;

  /// Throws std::runtime_error when the key is missing.
  const std::string& scalar(const std::string& key) const;
  const Matrix& tensor(const std::string& name) const;
  void set(const std::string& key, std::string value);
};

void write_document(std::ostream& out, const TensorDocument& doc);
/// Throws std::runtime_error with a line number on malformed input.
TensorDocument read_document(std::istream& in);

inline constexpr int kModelFormatVersion = 1;

TensorDocument model_document(const ModelParams& params);
/// Rebuilds and validates params; tensor names must match exactly.
ModelParams model_from_document(const TensorDocument& doc, const std::string& prefix = "");

void save_model(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_model(const std::filesystem::path& path);

/// Training state sufficient to resume bit-identically.
struct Checkpoint {
  ModelParams params;
  ModelParams adam_m;
  ModelParams adam_v;
  std::uint64_t step = 0;
  /// epochs fully completed
  int epoch = 0;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace cdkit
