#pragma once

#include "cdkit/partition.hpp"

namespace cdkit {

/// Fraction of unordered node pairs on which a and b agree about
/// co-membership. 1 for fewer than two nodes. Throws std::invalid_argument
/// on a size mismatch.
double pairwise_agreement(const Partition& a, const Partition& b);

}  // namespace cdkit
