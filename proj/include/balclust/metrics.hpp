#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "balclust/types.hpp"

namespace balclust {

/// counts[l][h]: samples in predicted cluster l and true class h.
struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::int64_t> row_sums;  // predicted cluster sizes
  std::vector<std::int64_t> col_sums;  // true class sizes
  std::int64_t n = 0;
};

ContingencyTable contingency_table(const Assignment& pred, const Assignment& truth);

/// Fraction of samples matched under the best one-to-one map from predicted clusters
/// to classes (Kuhn-Munkres on the zero-padded contingency table).
double accuracy(const Assignment& pred, const Assignment& truth);

/// I(P,Q) / sqrt(H(P) H(Q)) with natural logs. When either side has a single
/// non-empty cluster the value is 1 if both do and 0 otherwise.
double nmi(const Assignment& pred, const Assignment& truth);

struct BalanceReport {
  double penalty_value = 0.0;  // sum_k n_k^2
  double size_stddev = 0.0;    // population standard deviation of n_k
  bool is_perfectly_balanced = false;
};

BalanceReport balance_report(const Assignment& a);

struct MetricsReport {
  std::optional<double> acc;
  std::optional<double> nmi;
  ClusterSizes cluster_sizes;
  double penalty_value = 0.0;
  double size_stddev = 0.0;
  bool is_perfectly_balanced = false;
};

MetricsReport evaluate(const Assignment& pred, const std::optional<Assignment>& truth);

}  // namespace balclust
