#include "balclust/penalty.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace balclust {

PenaltyWeight::PenaltyWeight(double gamma) : gamma_(gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw std::invalid_argument("penalty weight must be finite and non-negative, got " +
                                std::to_string(gamma));
  }
}

std::int64_t exclusive_lasso_penalty(const ClusterSizes& sizes) {
  std::int64_t sum = 0;
  for (auto c : sizes.counts) sum += c * c;
  return sum;
}

std::int64_t penalty_delta(const ClusterSizes& sizes, int from, int to) {
  if (from < 0 || to < 0 || from >= sizes.k() || to >= sizes.k()) {
    throw std::invalid_argument("cluster index out of range");
  }
  if (sizes[from] == 0) {
    throw std::invalid_argument("cannot move a point out of empty cluster " + std::to_string(from));
  }
  if (from == to) return 0;
  return 2 * (sizes[to] - sizes[from]) + 2;
}

std::int64_t most_balanced_value(std::int64_t n, int k) {
  if (n < 0 || k < 1) throw std::invalid_argument("most_balanced_value needs n >= 0, k >= 1");
  const std::int64_t lo = n / k;
  const std::int64_t r = n % k;
  return r * (lo + 1) * (lo + 1) + (k - r) * lo * lo;
}

}  // namespace balclust
