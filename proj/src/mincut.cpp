#include "balclust/mincut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace balclust {
namespace {

void check_length(const AffinityMatrix& a, const Assignment& labels) {
  if (labels.size() != a.size()) {
    throw std::invalid_argument("assignment has " + std::to_string(labels.size()) +
                                " labels but affinity is " + std::to_string(a.size()) + "x" +
                                std::to_string(a.size()));
  }
}

// (A F)(i,k) = sum of A(i,j) over j in cluster k.
Eigen::MatrixXd neighbor_sums(const AffinityMatrix& a, const Assignment& labels) {
  const Index n = a.size();
  Eigen::MatrixXd af = Eigen::MatrixXd::Zero(n, labels.k());
  for (Index j = 0; j < n; ++j) {
    const Label lj = labels[j];
    for (Index i = 0; i < n; ++i) af(i, lj) += a(i, j);
  }
  return af;
}

double penalty_of(const std::vector<Label>& labels, int k, PenaltyWeight gamma) {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(k), 0);
  for (Label l : labels) ++sizes[static_cast<std::size_t>(l)];
  std::int64_t sq = 0;
  for (auto s : sizes) sq += s * s;
  return gamma.value() * static_cast<double>(sq);
}

// Tr(F'^T A F') from the neighbor sums of the old labels, touching only moved columns.
double within_after_moves(const AffinityMatrix& a, const Eigen::MatrixXd& af,
                          const Assignment& before, const Assignment& after,
                          const std::vector<Index>& moved) {
  const Index n = a.size();
  double within = 0.0;
  for (Index i = 0; i < n; ++i) within += af(i, after[i]);
  for (Index j : moved) {
    for (Index i = 0; i < n; ++i) {
      const double w = a(i, j);
      if (w == 0.0) continue;
      if (after[i] == after[j]) within += w;
      if (after[i] == before[j]) within -= w;
    }
  }
  return within;
}

bool strictly_better(double candidate, double current) {
  return candidate > current + 1e-12 * std::max(1.0, std::abs(current));
}

// Shifts to try, smallest first: 0, then thresholds that let roughly half, a quarter, ...
// of the currently improvable rows move, down to the single best row.
std::vector<double> shift_ladder(const ScoreMatrix& unshifted, const Assignment& labels) {
  std::vector<double> gaps;
  for (Index i = 0; i < unshifted.rows(); ++i) {
    const Label cur = labels[i];
    double best_other = -std::numeric_limits<double>::infinity();
    for (Index c = 0; c < unshifted.cols(); ++c) {
      if (c != cur) best_other = std::max(best_other, unshifted(i, c));
    }
    const double gap = best_other - unshifted(i, cur);
    if (gap > 0.0) gaps.push_back(gap);
  }
  std::sort(gaps.begin(), gaps.end(), std::greater<>());
  std::vector<double> ladder{0.0};
  for (std::size_t keep = gaps.size() / 2; keep >= 1; keep /= 2) {
    if (keep < gaps.size() && gaps[keep] > ladder.back()) ladder.push_back(gaps[keep]);
  }
  return ladder;
}

struct SingleMove {
  Index first = 0;
  Label second = 0;
  double gap = 0.0;
};

// Row with the largest positive unshifted gap (lowest index on ties) and its best other label.
std::optional<SingleMove> best_single_move(const ScoreMatrix& unshifted,
                                           const Assignment& labels) {
  std::optional<SingleMove> best;
  for (Index i = 0; i < unshifted.rows(); ++i) {
    const Label cur = labels[i];
    Label other = -1;
    for (Index c = 0; c < unshifted.cols(); ++c) {
      if (c == cur) continue;
      if (other < 0 || unshifted(i, c) > unshifted(i, other)) other = static_cast<Label>(c);
    }
    if (other < 0) continue;
    const double gap = unshifted(i, other) - unshifted(i, cur);
    if (gap > 0.0 && (!best || gap > best->gap)) best = SingleMove{i, other, gap};
  }
  return best;
}

}  // namespace

double select_rho(const AffinityMatrix& a, PenaltyWeight gamma, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("rho margin must be positive");
  const auto degrees = degree_vector(a);
  return degrees.maxCoeff() + gamma.value() * static_cast<double>(a.size()) + margin;
}

ScoreMatrix compute_scores(const AffinityMatrix& a, const Assignment& labels, double rho,
                           PenaltyWeight gamma) {
  check_length(a, labels);
  ScoreMatrix scores = neighbor_sums(a, labels);
  const auto sizes = cluster_sizes(labels);
  for (Index c = 0; c < labels.k(); ++c) {
    const double pen = gamma.value() * static_cast<double>(sizes[c]);
    for (Index i = 0; i < a.size(); ++i) scores(i, c) -= pen;
  }
  for (Index i = 0; i < a.size(); ++i) scores(i, labels[i]) += rho;
  return scores;
}

Assignment argmax_assign(const ScoreMatrix& scores) {
  std::vector<Label> labels(static_cast<std::size_t>(scores.rows()));
  for (Index i = 0; i < scores.rows(); ++i) {
    Label best = 0;
    for (Index c = 1; c < scores.cols(); ++c) {
      if (scores(i, c) > scores(i, best)) best = static_cast<Label>(c);
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return Assignment(std::move(labels), static_cast<int>(scores.cols()));
}

MincutObjective mincut_objective(const AffinityMatrix& a, const Assignment& labels,
                                 PenaltyWeight gamma) {
  check_length(a, labels);
  MincutObjective obj;
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < a.size(); ++j) {
      if (labels[i] == labels[j]) obj.within += a(i, j);
    }
  }
  obj.penalty = gamma.value() * static_cast<double>(exclusive_lasso_penalty(cluster_sizes(labels)));
  obj.total = obj.within - obj.penalty;
  return obj;
}

double shifted_objective(const AffinityMatrix& a, const Assignment& labels, double rho,
                         PenaltyWeight gamma) {
  return mincut_objective(a, labels, gamma).total + rho * static_cast<double>(labels.size());
}

Index repair_empty_clusters(const AffinityMatrix& a, Assignment& labels, PenaltyWeight gamma) {
  check_length(a, labels);
  Index moves = 0;
  for (Label empty = 0; empty < labels.k(); ++empty) {
    const auto sizes = cluster_sizes(labels);
    if (sizes[empty] != 0) continue;
    const auto scores = compute_scores(a, labels, 0.0, gamma);
    Index weakest = -1;
    double weakest_margin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < a.size(); ++i) {
      const Label cur = labels[i];
      if (sizes[cur] < 2) continue;
      double best_other = -std::numeric_limits<double>::infinity();
      for (Index c = 0; c < labels.k(); ++c) {
        if (c != cur) best_other = std::max(best_other, scores(i, c));
      }
      const double margin = scores(i, cur) - best_other;
      if (margin < weakest_margin) {
        weakest_margin = margin;
        weakest = i;
      }
    }
    if (weakest < 0) break;
    labels = labels.with_label(weakest, empty);
    ++moves;
  }
  return moves;
}

MincutResult fit_balanced_mincut(const DataMatrix& x, int k, int k_neighbors,
                                 const MincutConfig& cfg) {
  if (k < 1 || x.size() < k) {
    throw std::invalid_argument("balanced min-cut needs n >= K >= 1 (n=" +
                                std::to_string(x.size()) + ", K=" + std::to_string(k) + ")");
  }
  auto affinity = build_affinity(x, k_neighbors, cfg.scale);
  return fit_balanced_mincut(affinity, init_assignment(x.size(), k, cfg.init_mode, cfg.seed),
                             cfg);
}

MincutResult fit_balanced_mincut(const AffinityMatrix& a, Assignment init,
                                 const MincutConfig& cfg) {
  check_length(a, init);
  if (cfg.max_iters < 1) throw std::invalid_argument("min-cut config needs max_iters >= 1");

  MincutResult result{std::move(init), {}, select_rho(a, cfg.gamma, cfg.rho_margin), 0, false,
                      {}, 0, {}};
  const double n = static_cast<double>(a.size());
  auto obj = mincut_objective(a, result.assignment, cfg.gamma);
  auto record = [&](int t, double step_shift) {
    result.trace.push_back(
        {t, obj.within, obj.penalty, obj.total, obj.total + result.rho * n, step_shift});
  };
  record(0, 0.0);

  for (int t = 1; t <= cfg.max_iters; ++t) {
    result.iterations = t;
    const Assignment& current = result.assignment;
    const auto af = neighbor_sums(a, current);
    const auto unshifted = compute_scores(a, current, 0.0, cfg.gamma);
    const auto one_hot = current.one_hot();

    const std::vector<double> ladder = cfg.shift == ShiftPolicy::fixed
                                           ? std::vector<double>{result.rho}
                                           : shift_ladder(unshifted, current);
    bool accepted = false;
    auto try_candidate = [&](Assignment next, double shift) {
      std::vector<Index> moved;
      for (Index i = 0; i < a.size(); ++i) {
        if (next[i] != current[i]) moved.push_back(i);
      }
      if (moved.empty()) return false;
      const double within = within_after_moves(a, af, current, next, moved);
      const double total = within - penalty_of(next.labels(), next.k(), cfg.gamma);
      if (!strictly_better(total, obj.total)) return false;
      auto exact = mincut_objective(a, next, cfg.gamma);
      if (!strictly_better(exact.total, obj.total)) return false;
      result.assignment = std::move(next);
      obj = exact;
      record(t, shift);
      return true;
    };
    for (double shift : ladder) {
      Assignment next = argmax_assign(unshifted + shift * one_hot);
      if (next == current) break;  // larger shifts only keep more rows in place
      if (try_candidate(std::move(next), shift)) {
        accepted = true;
        break;
      }
    }
    if (!accepted && cfg.shift == ShiftPolicy::adaptive) {
      // Tied gaps can leave no rung that isolates one row; move the best single row directly.
      if (auto single = best_single_move(unshifted, current)) {
        accepted = try_candidate(current.with_label(single->first, single->second),
                                 single->gap);
      }
    }
    if (!accepted) {
      record(t, result.rho);
      result.converged = true;
      break;
    }
  }

  const auto sizes = cluster_sizes(result.assignment);
  for (int c = 0; c < sizes.k(); ++c) {
    if (sizes[c] == 0) result.empty_clusters.push_back(c);
  }
  if (cfg.repair_empty && !result.empty_clusters.empty()) {
    result.repaired = repair_empty_clusters(a, result.assignment, cfg.gamma);
  }
  result.final_objective = mincut_objective(a, result.assignment, cfg.gamma);
  return result;
}

}  // namespace balclust
