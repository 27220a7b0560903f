#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "balclust/types.hpp"

namespace balclust {

/// Symmetric, zero-diagonal similarity matrix with entries in [0, 1].
class AffinityMatrix {
 public:
  /// Validates the invariants exactly; throws std::invalid_argument otherwise.
  AffinityMatrix(Eigen::MatrixXd weights, int neighbor_count);

  Index size() const { return weights_.rows(); }
  int neighbor_count() const { return neighbor_count_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double operator()(Index i, Index j) const { return weights_(i, j); }

 private:
  Eigen::MatrixXd weights_;
  int neighbor_count_;
};

using NeighborLists = std::vector<std::vector<Index>>;
using DegreeVector = Eigen::VectorXd;

/// Bandwidth of the Gaussian kernel.
struct ScaleMode {
  enum class Kind { global, self_tuning };
  Kind kind = Kind::self_tuning;
  double delta = 0.0;  // global only

  static ScaleMode global(double delta);
  static ScaleMode self_tuning() { return {}; }
};

/// How directed kNN edges become undirected: keep an edge if either end lists the
/// other (max of the two weights), or only if both do (min).
enum class Symmetrization { either, mutual };

ScaleMode scale_mode_from_string(std::string_view text);  // "self" or "global:<delta>"
std::string to_string(const ScaleMode& mode);

/// k nearest samples of each sample by squared Euclidean distance, self excluded,
/// distance ties to the lower index. Throws unless 1 <= k <= n-1.
NeighborLists knn_sets(const DataMatrix& x, int k);

/// Gaussian kNN affinity. Global mode: exp(-d^2/delta^2). Self-tuning mode:
/// exp(-d^2/(s_i s_j)) with s_i the distance from x_i to its k-th neighbor.
AffinityMatrix build_affinity(const DataMatrix& x, int k, const ScaleMode& scale,
                              Symmetrization sym = Symmetrization::either);

DegreeVector degree_vector(const AffinityMatrix& a);

struct CutValue {
  double within = 0.0;  // Tr(F^T A F)
  double cut = 0.0;     // sum_k q_k^T (D - A) q_k
};

CutValue cut_value(const AffinityMatrix& a, const Assignment& labels);

void save_affinity_csv(const AffinityMatrix& a, const std::filesystem::path& path);
AffinityMatrix load_affinity_csv(const std::filesystem::path& path, int neighbor_count = 0);

}  // namespace balclust
