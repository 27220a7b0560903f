#pragma once

#include <vector>

#include "balclust/dataset.hpp"
#include "balclust/penalty.hpp"
#include "balclust/types.hpp"

namespace balclust {

/// Cluster centers H, one column per cluster (d x K).
class Centroids {
 public:
  explicit Centroids(Eigen::MatrixXd values);

  Index dim() const { return values_.rows(); }
  int k() const { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  auto center(Index k) const { return values_.col(k); }

  bool operator==(const Centroids& other) const { return values_ == other.values_; }

 private:
  Eigen::MatrixXd values_;
};

struct KmeansConfig {
  PenaltyWeight gamma{0.0};
  int max_outer_iters = 300;
  int max_sweeps_per_update = 10;
  double rel_tol = 1e-8;
  RngSeed seed{};
  InitMode init_mode = InitMode::uniform_random;
};

struct KmeansObjective {
  double fit = 0.0;      // sum_i ||x_i - h_{label(i)}||^2
  double penalty = 0.0;  // gamma * sum_k n_k^2
  double total = 0.0;
};

struct KmeansRecord {
  int iteration = 0;
  double fit = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

/// One record per outer iteration; record 0 is the initial assignment.
using KmeansTrace = std::vector<KmeansRecord>;

struct SweepResult {
  Assignment assignment;
  Index changed = 0;
};

struct KmeansStep {
  Centroids centroids;    // centers the sweeps were run against
  Assignment assignment;  // assignment after the sweeps
  Index changed = 0;      // rows relabeled across all sweeps
  int sweeps = 0;
};

struct KmeansResult {
  Assignment assignment;
  Centroids centroids;
  KmeansTrace trace;
  int iterations = 0;
  bool converged = false;
};

KmeansObjective kmeans_objective(const DataMatrix& x, const Assignment& a, const Centroids& h,
                                 PenaltyWeight gamma);

/// Cluster means. An empty cluster is re-seeded at the sample farthest from its own
/// centroid (lowest index on ties; a sample is used for at most one re-seed).
Centroids update_centroids(const DataMatrix& x, const Assignment& a);

/// One pass over rows 0..n-1. Row i takes
///   argmin_k ||x_i - h_k||^2 + gamma * (2 m_k + 1)
/// where m_k counts cluster k without row i under the partially updated labels.
/// Ties go to the lowest cluster index.
SweepResult sweep_rows(const DataMatrix& x, const Assignment& a, const Centroids& h,
                       PenaltyWeight gamma);

/// update_centroids followed by up to `max_sweeps` sweeps (stops early on a quiet sweep).
/// With gamma = 0 this is exactly one Lloyd iteration.
KmeansStep kmeans_iteration(const DataMatrix& x, const Assignment& a, PenaltyWeight gamma,
                            int max_sweeps);

/// Moves one point into each empty cluster: the point farthest from its center in `h`,
/// taken from clusters of size >= 2. Never increases the objective. Returns moves made.
Index fill_empty_clusters(const DataMatrix& x, Assignment& a, const Centroids& h);

KmeansResult fit_balanced_kmeans(const DataMatrix& x, int k, const KmeansConfig& cfg);
KmeansResult fit_balanced_kmeans(const DataMatrix& x, Assignment init, const KmeansConfig& cfg);

}  // namespace balclust
