#pragma once

#include <vector>

#include "balclust/affinity.hpp"
#include "balclust/dataset.hpp"
#include "balclust/penalty.hpp"
#include "balclust/types.hpp"

namespace balclust {

/// B = (rho I + A - gamma 1 1^T) F, n x K.
using ScoreMatrix = Eigen::MatrixXd;

/// Shift used inside each score/argmax update.
///  - fixed: every update uses the certified rho from select_rho.
///  - adaptive: each update tries smaller shifts first and keeps the first one whose
///    argmax strictly raises the objective; if none does, it tries the single best row
///    move, so a converged result is single-move locally optimal.
enum class ShiftPolicy { adaptive, fixed };

struct MincutConfig {
  PenaltyWeight gamma{0.0};
  int max_iters = 300;
  RngSeed seed{};
  InitMode init_mode = InitMode::uniform_random;
  double rho_margin = 1.0;
  ShiftPolicy shift = ShiftPolicy::adaptive;
  bool repair_empty = false;
  ScaleMode scale = ScaleMode::self_tuning();
};

struct MincutObjective {
  double within = 0.0;   // Tr(F^T A F)
  double penalty = 0.0;  // gamma * sum_k n_k^2
  double total = 0.0;    // within - penalty
};

struct MincutRecord {
  int iteration = 0;
  double within = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  double shifted = 0.0;     // Tr(F^T M F) with the certified rho
  double step_shift = 0.0;  // shift that produced this record's assignment
};

struct MincutResult {
  Assignment assignment;
  std::vector<MincutRecord> trace;
  double rho = 0.0;  // certified shift
  int iterations = 0;
  bool converged = false;
  std::vector<int> empty_clusters;  // empty in the algorithm's output, before any repair
  Index repaired = 0;
  MincutObjective final_objective;
};

/// rho = max_i sum_j A_ij + gamma n + margin. Every Gershgorin disc of
/// rho I + A - gamma 1 1^T then sits strictly right of zero.
double select_rho(const AffinityMatrix& a, PenaltyWeight gamma, double margin);

/// scores(i,k) = rho [label(i) = k] + (A q_k)_i - gamma n_k.
ScoreMatrix compute_scores(const AffinityMatrix& a, const Assignment& labels, double rho,
                           PenaltyWeight gamma);

/// Row-wise argmax (lowest index on ties); the exact maximizer of Tr(F^T B) over indicators.
Assignment argmax_assign(const ScoreMatrix& scores);

MincutObjective mincut_objective(const AffinityMatrix& a, const Assignment& labels,
                                 PenaltyWeight gamma);

/// Tr(F^T (rho I + A - gamma 1 1^T) F) = total + rho n.
double shifted_objective(const AffinityMatrix& a, const Assignment& labels, double rho,
                         PenaltyWeight gamma);

/// Moves the weakest-margin point (from a cluster of size >= 2) into each empty cluster.
Index repair_empty_clusters(const AffinityMatrix& a, Assignment& labels, PenaltyWeight gamma);

MincutResult fit_balanced_mincut(const DataMatrix& x, int k, int k_neighbors,
                                 const MincutConfig& cfg);
MincutResult fit_balanced_mincut(const AffinityMatrix& a, Assignment init,
                                 const MincutConfig& cfg);

}  // namespace balclust
