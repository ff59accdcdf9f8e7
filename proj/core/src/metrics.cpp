#include "cdkit/metrics.hpp"

#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace cdkit {
namespace {

double pairs_of(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

double pairwise_agreement(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw std::invalid_argument("partitions cover different node counts");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::unordered_map<std::uint64_t, std::size_t> joint;
  for (NodeId v = 0; v < n; ++v) ++joint[(static_cast<std::uint64_t>(a[v]) << 32) | b[v]];
  double both = 0.0;
  for (const auto& [key, count] : joint) both += pairs_of(static_cast<double>(count));
  double in_a = 0.0, in_b = 0.0;
  for (std::size_t s : a.community_sizes()) in_a += pairs_of(static_cast<double>(s));
  for (std::size_t s : b.community_sizes()) in_b += pairs_of(static_cast<double>(s));
  const double total = pairs_of(static_cast<double>(n));
  // disagreements: together in exactly one of the two partitions
  return (total - (in_a + in_b - 2.0 * both)) / total;
}

}  // namespace cdkit
