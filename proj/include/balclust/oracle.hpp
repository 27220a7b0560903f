#pragma once

#include <cstdint>
#include <vector>

#include "balclust/affinity.hpp"
#include "balclust/types.hpp"

// Brute-force references for tiny instances. Written straight from the objectives and
// sharing no code with the solvers, so they can be used to check them.
namespace balclust::oracle {

struct EnumerationBudget {
  std::uint64_t max_states = 1'000'000;
};

struct Optimum {
  std::vector<Label> labels;
  double total = 0.0;
};

/// Global minimizer of sum_i ||x_i - mean(cluster)||^2 + gamma sum_k n_k^2 over all K^n
/// labelings; lexicographically first on ties. Throws std::length_error over budget.
Optimum exhaustive_kmeans_optimum(const Eigen::MatrixXd& x, int k, double gamma,
                                  EnumerationBudget budget = {});

/// Global maximizer of Tr(F^T A F) - gamma sum_k n_k^2; lexicographically first on ties.
Optimum exhaustive_mincut_optimum(const Eigen::MatrixXd& a, int k, double gamma,
                                  EnumerationBudget budget = {});

/// Best matched fraction over every one-to-one map of predicted to true labels.
/// Throws std::length_error with more than 6 distinct labels on either side.
double brute_force_accuracy(const std::vector<Label>& pred, const std::vector<Label>& truth);

/// Smallest sum of squares over all compositions of n into k non-negative parts.
std::int64_t min_square_sum_by_enumeration(int n, int k);

}  // namespace balclust::oracle
