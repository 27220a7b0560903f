#pragma once

#include <cstdint>

#include "balclust/types.hpp"

namespace balclust {

/// Weight of the balance term. Zero gives back the classical algorithms.
class PenaltyWeight {
 public:
  PenaltyWeight() = default;
  /// Throws std::invalid_argument unless gamma is finite and >= 0.
  explicit PenaltyWeight(double gamma);

  double value() const { return gamma_; }

 private:
  double gamma_ = 0.0;
};

// The exclusive lasso restricted to indicator matrices is Tr(F^T 1 1^T F) = sum_k n_k^2.
// Everything here works on integer sizes, so results are exact.

std::int64_t exclusive_lasso_penalty(const ClusterSizes& sizes);

/// Change in sum_k n_k^2 when one point moves from cluster `from` to `to`.
/// Zero when from == to; throws std::invalid_argument if `from` is empty.
std::int64_t penalty_delta(const ClusterSizes& sizes, int from, int to);

/// Smallest sum of squares over all ways to split n points into k clusters.
std::int64_t most_balanced_value(std::int64_t n, int k);

}  // namespace balclust
