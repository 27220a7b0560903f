#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace balclust {

using Index = Eigen::Index;
using Label = int;

/// Seed for every stochastic operation. Same seed and inputs give the same output.
struct RngSeed {
  std::uint64_t value = 0;
};

/// Samples stored column-wise: d features x n samples.
class DataMatrix {
 public:
  /// Throws std::invalid_argument on an empty matrix or a non-finite entry.
  explicit DataMatrix(Eigen::MatrixXd values);

  Index dim() const { return values_.rows(); }
  Index size() const { return values_.cols(); }

  const Eigen::MatrixXd& values() const { return values_; }
  auto sample(Index j) const { return values_.col(j); }
  double operator()(Index feature, Index j) const { return values_(feature, j); }

 private:
  Eigen::MatrixXd values_;
};

/// Hard 1-of-K clustering: one label in [0, K) per sample.
class Assignment {
 public:
  /// Throws std::invalid_argument if k < 1 or a label falls outside [0, k).
  Assignment(std::vector<Label> labels, int k);

  const std::vector<Label>& labels() const { return labels_; }
  int k() const { return k_; }
  Index size() const { return static_cast<Index>(labels_.size()); }
  Label operator[](Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// Indicator matrix F (n x K), exactly one 1 per row.
  Eigen::MatrixXd one_hot() const;

  /// Copy with labels[i] = to.
  Assignment with_label(Index i, Label to) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Label> labels_;
  int k_;
};

/// Per-cluster counts n_k, summing to n.
struct ClusterSizes {
  std::vector<std::int64_t> counts;

  std::int64_t total() const;
  std::int64_t max() const;
  std::int64_t min() const;
  int k() const { return static_cast<int>(counts.size()); }
  std::int64_t operator[](Index k) const { return counts[static_cast<std::size_t>(k)]; }
  bool operator==(const ClusterSizes&) const = default;
};

ClusterSizes cluster_sizes(const Assignment& a);

bool has_empty_cluster(const Assignment& a);

}  // namespace balclust
