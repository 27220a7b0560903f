#include "balclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "balclust/hungarian.hpp"
#include "balclust/penalty.hpp"

namespace balclust {
namespace {

void check_lengths(const Assignment& pred, const Assignment& truth) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("label sequences differ in length (" +
                                std::to_string(pred.size()) + " vs " +
                                std::to_string(truth.size()) + ")");
  }
}

// Summing sorted terms makes the result independent of label order.
double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double entropy(const std::vector<std::int64_t>& sizes, double n) {
  std::vector<double> terms;
  for (auto s : sizes) {
    if (s > 0) terms.push_back(static_cast<double>(s) / n * std::log(n / static_cast<double>(s)));
  }
  return sorted_sum(std::move(terms));
}

int occupied(const std::vector<std::int64_t>& sizes) {
  return static_cast<int>(std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; }));
}

}  // namespace

ContingencyTable contingency_table(const Assignment& pred, const Assignment& truth) {
  check_lengths(pred, truth);
  ContingencyTable t;
  t.counts.assign(static_cast<std::size_t>(pred.k()),
                  std::vector<std::int64_t>(static_cast<std::size_t>(truth.k()), 0));
  t.row_sums.assign(static_cast<std::size_t>(pred.k()), 0);
  t.col_sums.assign(static_cast<std::size_t>(truth.k()), 0);
  for (Index i = 0; i < pred.size(); ++i) {
    const auto l = static_cast<std::size_t>(pred[i]);
    const auto h = static_cast<std::size_t>(truth[i]);
    ++t.counts[l][h];
    ++t.row_sums[l];
    ++t.col_sums[h];
  }
  t.n = pred.size();
  return t;
}

double accuracy(const Assignment& pred, const Assignment& truth) {
  const auto t = contingency_table(pred, truth);
  if (t.n == 0) return 0.0;
  const auto rows = t.counts.size();
  const auto cols = t.col_sums.size();
  const auto m = std::max(rows, cols);
  std::int64_t largest = 0;
  for (const auto& row : t.counts) {
    for (auto c : row) largest = std::max(largest, c);
  }
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(static_cast<Index>(m), static_cast<Index>(m),
                                                   static_cast<double>(largest));
  for (std::size_t l = 0; l < rows; ++l) {
    for (std::size_t h = 0; h < cols; ++h) {
      cost(static_cast<Index>(l), static_cast<Index>(h)) =
          static_cast<double>(largest - t.counts[l][h]);
    }
  }
  const auto match = min_cost_matching(cost);
  std::int64_t matched = 0;
  for (std::size_t l = 0; l < rows; ++l) {
    const auto h = static_cast<std::size_t>(match[l]);
    if (h < cols) matched += t.counts[l][h];
  }
  return static_cast<double>(matched) / static_cast<double>(t.n);
}

double nmi(const Assignment& pred, const Assignment& truth) {
  const auto t = contingency_table(pred, truth);
  if (t.n == 0) throw std::invalid_argument("nmi needs at least one sample");
  const bool pred_single = occupied(t.row_sums) <= 1;
  const bool truth_single = occupied(t.col_sums) <= 1;
  if (pred_single || truth_single) return pred_single && truth_single ? 1.0 : 0.0;

  const double n = static_cast<double>(t.n);
  std::vector<double> terms;
  for (std::size_t l = 0; l < t.counts.size(); ++l) {
    for (std::size_t h = 0; h < t.col_sums.size(); ++h) {
      const auto c = t.counts[l][h];
      if (c == 0) continue;
      const double joint = static_cast<double>(c);
      const double ratio = (n * joint) / (static_cast<double>(t.row_sums[l]) *
                                          static_cast<double>(t.col_sums[h]));
      terms.push_back(joint / n * std::log(ratio));
    }
  }
  const double mutual = sorted_sum(std::move(terms));
  return mutual / std::sqrt(entropy(t.row_sums, n) * entropy(t.col_sums, n));
}

BalanceReport balance_report(const Assignment& a) {
  const auto sizes = cluster_sizes(a);
  BalanceReport r;
  r.penalty_value = static_cast<double>(exclusive_lasso_penalty(sizes));
  const double k = static_cast<double>(sizes.k());
  const double mean = static_cast<double>(sizes.total()) / k;
  double var = 0.0;
  for (auto s : sizes.counts) {
    const double dev = static_cast<double>(s) - mean;
    var += dev * dev;
  }
  r.size_stddev = std::sqrt(var / k);
  r.is_perfectly_balanced = sizes.max() - sizes.min() <= 1;
  return r;
}

MetricsReport evaluate(const Assignment& pred, const std::optional<Assignment>& truth) {
  MetricsReport m;
  if (truth) {
    m.acc = accuracy(pred, *truth);
    m.nmi = nmi(pred, *truth);
  }
  m.cluster_sizes = cluster_sizes(pred);
  const auto b = balance_report(pred);
  m.penalty_value = b.penalty_value;
  m.size_stddev = b.size_stddev;
  m.is_perfectly_balanced = b.is_perfectly_balanced;
  return m;
}

}  // namespace balclust
