#include "balclust/types.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace balclust {

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("data matrix must have at least one feature and one sample");
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("data matrix contains a non-finite entry");
  }
}

Assignment::Assignment(std::vector<Label> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k_ < 1) {
    throw std::invalid_argument("cluster count must be at least 1");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 || labels_[i] >= k_) {
      throw std::invalid_argument("label " + std::to_string(labels_[i]) + " at position " +
                                  std::to_string(i) + " is outside [0, " + std::to_string(k_) +
                                  ")");
    }
  }
}

Eigen::MatrixXd Assignment::one_hot() const {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(size(), k_);
  for (Index i = 0; i < size(); ++i) {
    f(i, (*this)[i]) = 1.0;
  }
  return f;
}

Assignment Assignment::with_label(Index i, Label to) const {
  auto labels = labels_;
  labels.at(static_cast<std::size_t>(i)) = to;
  return Assignment(std::move(labels), k_);
}

std::int64_t ClusterSizes::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t ClusterSizes::max() const {
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

std::int64_t ClusterSizes::min() const {
  return counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());
}

ClusterSizes cluster_sizes(const Assignment& a) {
  ClusterSizes sizes{std::vector<std::int64_t>(static_cast<std::size_t>(a.k()), 0)};
  for (Label l : a.labels()) {
    ++sizes.counts[static_cast<std::size_t>(l)];
  }
  return sizes;
}

bool has_empty_cluster(const Assignment& a) { return cluster_sizes(a).min() == 0; }

}  // namespace balclust
