#include "cdkit/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cdkit/format.hpp"

namespace cdkit {
namespace {

const char* const kModelKind = "cdkit-model";
const char* const kCheckpointKind = "cdkit-checkpoint";

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t pos = 0;
  const auto v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

void add_params(TensorDocument& doc, const ModelParams& params, const std::string& prefix) {
  params.for_each_tensor(
      [&](const std::string& name, const Matrix& t) { doc.tensors.emplace_back(prefix + name, t); });
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

TensorDocument read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_document(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace

const std::string& TensorDocument::scalar(const std::string& key) const {
  for (const auto& [k, v] : scalars) {
    if (k == key) return v;
  }
  throw std::runtime_error("missing key '" + key + "' in " + kind + " document");
}

const Matrix& TensorDocument::tensor(const std::string& name) const {
  for (const auto& [k, t] : tensors) {
    if (k == name) return t;
  }
  throw std::runtime_error("missing tensor '" + name + "' in " + kind + " document");
}

void TensorDocument::set(const std::string& key, std::string value) {
  for (auto& [k, v] : scalars) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  scalars.emplace_back(key, std::move(value));
}

void write_document(std::ostream& out, const TensorDocument& doc) {
  out << doc.kind << ' ' << doc.version << '\n';
  for (const auto& [k, v] : doc.scalars) out << k << ' ' << v << '\n';
  for (const auto& [name, t] : doc.tensors) {
    out << "tensor " << name << ' ' << t.rows() << ' ' << t.cols() << '\n';
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        if (c) out << ' ';
        out << format_double(t(r, c));
      }
      out << '\n';
    }
  }
  out << "end\n";
}

TensorDocument read_document(std::istream& in) {
  TensorDocument doc;
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next()) fail(line_no, "empty document");
  {
    const auto head = split_ws(line);
    if (head.size() != 2) fail(line_no, "expected '<kind> <version>'");
    doc.kind = head[0];
    doc.version = parse_int(head[1]);
  }
  bool ended = false;
  while (next()) {
    const auto tok = split_ws(line);
    if (tok.size() == 1 && tok[0] == "end") {
      ended = true;
      break;
    }
    if (tok[0] != "tensor") {
      if (tok.size() != 2) fail(line_no, "expected 'key value'");
      if (!doc.tensors.empty()) fail(line_no, "scalar after tensors");
      doc.scalars.emplace_back(tok[0], tok[1]);
      continue;
    }
    if (tok.size() != 4) fail(line_no, "expected 'tensor <name> <rows> <cols>'");
    const int rows = parse_int(tok[2]);
    const int cols = parse_int(tok[3]);
    if (rows < 0 || cols < 0) fail(line_no, "negative tensor shape");
    Matrix t(rows, cols);
    for (int r = 0; r < rows; ++r) {
      if (!next()) fail(line_no, "tensor " + tok[1] + " truncated");
      const auto vals = split_ws(line);
      if (vals.size() != static_cast<std::size_t>(cols)) {
        fail(line_no, "tensor " + tok[1] + " row has " + std::to_string(vals.size()) + " values, expected " +
                          std::to_string(cols));
      }
      for (int c = 0; c < cols; ++c) {
        try {
          t(r, c) = parse_double(vals[c]);
        } catch (const std::invalid_argument&) {
          fail(line_no, "bad number '" + vals[c] + "'");
        }
      }
    }
    doc.tensors.emplace_back(tok[1], std::move(t));
  }
  if (!ended) fail(line_no, "missing 'end'");
  return doc;
}

TensorDocument model_document(const ModelParams& params) {
  TensorDocument doc;
  doc.kind = kModelKind;
  doc.version = kModelFormatVersion;
  doc.set("dim", std::to_string(params.dims.dim));
  doc.set("feat_layers", std::to_string(params.dims.feat_layers));
  doc.set("gnn_layers", std::to_string(params.dims.gnn_layers));
  doc.set("bc_layers", std::to_string(params.dims.bc_layers));
  doc.set("modularity_features", params.variant.modularity_features ? "1" : "0");
  doc.set("encoder", params.variant.encoder ? "1" : "0");
  doc.set("pair_temperature", params.variant.pair_temperature ? "1" : "0");
  doc.set("naive_temperature", format_double(params.variant.naive_temperature));
  doc.set("projection_seed", std::to_string(params.projection_seed));
  add_params(doc, params, "");
  return doc;
}

ModelParams model_from_document(const TensorDocument& doc, const std::string& prefix) {
  if (doc.version != kModelFormatVersion) {
    throw std::runtime_error("unsupported format version " + std::to_string(doc.version));
  }
  ModelParams p;
  p.dims.dim = parse_int(doc.scalar("dim"));
  p.dims.feat_layers = parse_int(doc.scalar("feat_layers"));
  p.dims.gnn_layers = parse_int(doc.scalar("gnn_layers"));
  p.dims.bc_layers = parse_int(doc.scalar("bc_layers"));
  p.variant.modularity_features = doc.scalar("modularity_features") == "1";
  p.variant.encoder = doc.scalar("encoder") == "1";
  p.variant.pair_temperature = doc.scalar("pair_temperature") == "1";
  p.variant.naive_temperature = parse_double(doc.scalar("naive_temperature"));
  p.projection_seed = parse_u64(doc.scalar("projection_seed"));
  if (p.dims.dim < 1 || p.dims.feat_layers < 1 || p.dims.gnn_layers < 1 || p.dims.bc_layers < 1) {
    throw std::runtime_error("invalid model dimensions");
  }
  p.feat.resize(p.dims.feat_layers);
  p.gnn.resize(p.dims.gnn_layers);
  p.src_head.resize(p.dims.bc_layers);
  p.dst_head.resize(p.dims.bc_layers);
  p.for_each_tensor([&](const std::string& name, Matrix& t) { t = doc.tensor(prefix + name); });
  p.validate();
  return p;
}

void save_model(const std::filesystem::path& path, const ModelParams& params) {
  auto out = open_out(path);
  write_document(out, model_document(params));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ModelParams load_model(const std::filesystem::path& path) {
  const auto doc = read_file(path);
  if (doc.kind != kModelKind) throw std::runtime_error(path.string() + " is not a model file");
  return model_from_document(doc);
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  TensorDocument doc = model_document(ckpt.params);
  doc.kind = kCheckpointKind;
  doc.set("step", std::to_string(ckpt.step));
  doc.set("epoch", std::to_string(ckpt.epoch));
  add_params(doc, ckpt.adam_m, "adam_m.");
  add_params(doc, ckpt.adam_v, "adam_v.");
  auto out = open_out(path);
  write_document(out, doc);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto doc = read_file(path);
  if (doc.kind != kCheckpointKind) throw std::runtime_error(path.string() + " is not a checkpoint file");
  Checkpoint c;
  c.params = model_from_document(doc);
  c.adam_m = model_from_document(doc, "adam_m.");
  c.adam_v = model_from_document(doc, "adam_v.");
  c.adam_m.projection_seed = c.adam_v.projection_seed = c.params.projection_seed;
  c.step = parse_u64(doc.scalar("step"));
  c.epoch = parse_int(doc.scalar("epoch"));
  return c;
}

}  // namespace cdkit
