#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cdkit/graph.hpp"

namespace cdkit {

using Label = std::uint32_t;

/// Node -> community assignment with dense labels in [0, K).
class Partition {
 public:
  Partition() = default;

  /// Takes labels that are already dense in [0, K); throws std::invalid_argument
  /// if some label in [0, max] is unused.
  explicit Partition(std::vector<Label> labels);

  /// Relabels arbitrary ids to dense labels in order of first appearance.
  static Partition from_labels(std::span<const Label> raw);
  static Partition singletons(std::size_t n);
  static Partition single(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  Label community_count() const noexcept { return community_count_; }
  Label operator[](NodeId v) const noexcept { return labels_[v]; }
  std::span<const Label> labels() const noexcept { return labels_; }

  /// Sizes of every community, indexed by label.
  std::vector<std::size_t> community_sizes() const;
  /// label -> member nodes (ascending).
  std::vector<std::vector<NodeId>> members() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Label> labels_;
  Label community_count_ = 0;
};

/// True when a and b induce the same grouping up to relabeling.
bool same_grouping(const Partition& a, const Partition& b);

}  // namespace cdkit
