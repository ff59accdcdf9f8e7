#include "cdkit/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cdkit {

Partition::Partition(std::vector<Label> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) return;
  const Label max_label = *std::max_element(labels_.begin(), labels_.end());
  if (max_label >= labels_.size()) {
    throw std::invalid_argument("label " + std::to_string(max_label) + " exceeds node count");
  }
  std::vector<char> used(static_cast<std::size_t>(max_label) + 1, 0);
  for (Label l : labels_) used[l] = 1;
  const auto missing = std::find(used.begin(), used.end(), 0);
  if (missing != used.end()) {
    throw std::invalid_argument("labels are not dense: label " +
                                std::to_string(missing - used.begin()) + " is unused");
  }
  community_count_ = max_label + 1;
}

Partition Partition::from_labels(std::span<const Label> raw) {
  std::vector<Label> dense(raw.size());
  std::unordered_map<Label, Label> remap;
  remap.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(raw[i], static_cast<Label>(remap.size()));
    dense[i] = it->second;
  }
  return Partition(std::move(dense));
}

Partition Partition::singletons(std::size_t n) {
  std::vector<Label> labels(n);
  std::iota(labels.begin(), labels.end(), Label{0});
  return Partition(std::move(labels));
}

Partition Partition::single(std::size_t n) { return Partition(std::vector<Label>(n, 0)); }

std::vector<std::size_t> Partition::community_sizes() const {
  std::vector<std::size_t> sizes(community_count_, 0);
  for (Label l : labels_) ++sizes[l];
  return sizes;
}

std::vector<std::vector<NodeId>> Partition::members() const {
  std::vector<std::vector<NodeId>> out(community_count_);
  for (NodeId v = 0; v < labels_.size(); ++v) out[labels_[v]].push_back(v);
  return out;
}

bool same_grouping(const Partition& a, const Partition& b) {
  if (a.size() != b.size() || a.community_count() != b.community_count()) return false;
  constexpr Label unset = std::numeric_limits<Label>::max();
  std::vector<Label> forward(a.community_count(), unset);
  std::vector<Label> backward(b.community_count(), unset);
  for (NodeId v = 0; v < a.size(); ++v) {
    const Label la = a[v];
    const Label lb = b[v];
    if (forward[la] == unset && backward[lb] == unset) {
      forward[la] = lb;
      backward[lb] = la;
    } else if (forward[la] != lb || backward[lb] != la) {
      return false;
    }
  }
  return true;
}

}  // namespace cdkit
