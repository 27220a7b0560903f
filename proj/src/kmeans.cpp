#include "balclust/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace balclust {
namespace {

// Plain loop so the reduction order is fixed regardless of vectorization.
double squared_distance(const DataMatrix& x, Index i, const Eigen::MatrixXd& h, Index k) {
  double s = 0.0;
  for (Index f = 0; f < x.dim(); ++f) {
    const double diff = x(f, i) - h(f, k);
    s += diff * diff;
  }
  return s;
}

void check_shapes(const DataMatrix& x, const Assignment& a, const Centroids& h) {
  if (a.size() != x.size()) {
    throw std::invalid_argument("assignment has " + std::to_string(a.size()) +
                                " labels but data has " + std::to_string(x.size()) + " samples");
  }
  if (h.dim() != x.dim() || h.k() != a.k()) {
    throw std::invalid_argument("centroid matrix is " + std::to_string(h.dim()) + "x" +
                                std::to_string(h.k()) + ", expected " + std::to_string(x.dim()) +
                                "x" + std::to_string(a.k()));
  }
}

}  // namespace

Centroids::Centroids(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw std::invalid_argument("centroids contain a non-finite entry");
}

KmeansObjective kmeans_objective(const DataMatrix& x, const Assignment& a, const Centroids& h,
                                 PenaltyWeight gamma) {
  check_shapes(x, a, h);
  KmeansObjective obj;
  for (Index i = 0; i < x.size(); ++i) obj.fit += squared_distance(x, i, h.values(), a[i]);
  obj.penalty = gamma.value() * static_cast<double>(exclusive_lasso_penalty(cluster_sizes(a)));
  obj.total = obj.fit + obj.penalty;
  return obj;
}

Centroids update_centroids(const DataMatrix& x, const Assignment& a) {
  if (a.size() != x.size()) throw std::invalid_argument("assignment/data length mismatch");
  const Index d = x.dim();
  const int k = a.k();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, k);
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < x.size(); ++i) {
    const Label l = a[i];
    for (Index f = 0; f < d; ++f) h(f, l) += x(f, i);
    ++counts[static_cast<std::size_t>(l)];
  }
  bool any_empty = false;
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      any_empty = true;
      continue;
    }
    const double nk = static_cast<double>(counts[static_cast<std::size_t>(c)]);
    for (Index f = 0; f < d; ++f) h(f, c) /= nk;
  }
  if (!any_empty) return Centroids(std::move(h));

  std::vector<double> dist(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) {
    dist[static_cast<std::size_t>(i)] = squared_distance(x, i, h, a[i]);
  }
  std::vector<bool> used(dist.size(), false);
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] != 0) continue;
    Index best = -1;
    for (Index i = 0; i < x.size(); ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (used[si]) continue;
      if (best < 0 || dist[si] > dist[static_cast<std::size_t>(best)]) best = i;
    }
    if (best < 0) best = 0;  // more empty clusters than samples
    used[static_cast<std::size_t>(best)] = true;
    h.col(c) = x.sample(best);
  }
  return Centroids(std::move(h));
}

SweepResult sweep_rows(const DataMatrix& x, const Assignment& a, const Centroids& h,
                       PenaltyWeight gamma) {
  check_shapes(x, a, h);
  std::vector<Label> labels = a.labels();
  std::vector<std::int64_t> sizes = cluster_sizes(a).counts;
  const double g = gamma.value();
  Index changed = 0;

  for (Index i = 0; i < x.size(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    const Label current = labels[si];
    --sizes[static_cast<std::size_t>(current)];
    Label best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (Label c = 0; c < a.k(); ++c) {
      const double m = static_cast<double>(sizes[static_cast<std::size_t>(c)]);
      const double cost = squared_distance(x, i, h.values(), c) + g * (2.0 * m + 1.0);
      if (cost < best_cost) {
        best_cost = cost;
        best = c;
      }
    }
    ++sizes[static_cast<std::size_t>(best)];
    if (best != current) {
      labels[si] = best;
      ++changed;
    }
  }
  return {Assignment(std::move(labels), a.k()), changed};
}

KmeansStep kmeans_iteration(const DataMatrix& x, const Assignment& a, PenaltyWeight gamma,
                            int max_sweeps) {
  KmeansStep step{update_centroids(x, a), a, 0, 0};
  while (step.sweeps < max_sweeps) {
    auto sweep = sweep_rows(x, step.assignment, step.centroids, gamma);
    ++step.sweeps;
    step.assignment = std::move(sweep.assignment);
    step.changed += sweep.changed;
    if (sweep.changed == 0) break;
  }
  return step;
}

Index fill_empty_clusters(const DataMatrix& x, Assignment& a, const Centroids& h) {
  auto sizes = cluster_sizes(a).counts;
  std::vector<Label> labels = a.labels();
  Index moves = 0;
  for (Label c = 0; c < a.k(); ++c) {
    if (sizes[static_cast<std::size_t>(c)] != 0) continue;
    Index best = -1;
    double best_dist = -1.0;
    for (Index i = 0; i < x.size(); ++i) {
      const Label l = labels[static_cast<std::size_t>(i)];
      if (sizes[static_cast<std::size_t>(l)] < 2) continue;
      const double dist = squared_distance(x, i, h.values(), l);
      if (dist > best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best < 0) break;  // n < k: nothing left to donate
    auto& l = labels[static_cast<std::size_t>(best)];
    --sizes[static_cast<std::size_t>(l)];
    l = c;
    ++sizes[static_cast<std::size_t>(c)];
    ++moves;
  }
  if (moves > 0) a = Assignment(std::move(labels), a.k());
  return moves;
}

KmeansResult fit_balanced_kmeans(const DataMatrix& x, int k, const KmeansConfig& cfg) {
  if (k < 1 || x.size() < k) {
    throw std::invalid_argument("balanced k-means needs n >= K >= 1 (n=" +
                                std::to_string(x.size()) + ", K=" + std::to_string(k) + ")");
  }
  return fit_balanced_kmeans(x, init_assignment(x.size(), k, cfg.init_mode, cfg.seed), cfg);
}

KmeansResult fit_balanced_kmeans(const DataMatrix& x, Assignment init, const KmeansConfig& cfg) {
  if (init.size() != x.size()) throw std::invalid_argument("initial assignment length mismatch");
  if (cfg.max_outer_iters < 1 || !(cfg.rel_tol > 0.0) || cfg.max_sweeps_per_update < 1) {
    throw std::invalid_argument("k-means config needs max_outer_iters >= 1, "
                                "max_sweeps_per_update >= 1 and rel_tol > 0");
  }
  KmeansResult result{std::move(init), Centroids(Eigen::MatrixXd()), {}, 0, false};
  result.centroids = update_centroids(x, result.assignment);
  auto obj = kmeans_objective(x, result.assignment, result.centroids, cfg.gamma);
  result.trace.push_back({0, obj.fit, obj.penalty, obj.total});

  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    result.iterations = t;
    auto step = kmeans_iteration(x, result.assignment, cfg.gamma, cfg.max_sweeps_per_update);
    Index changed = step.changed;
    if (has_empty_cluster(step.assignment)) {
      changed += fill_empty_clusters(x, step.assignment, step.centroids);
    }
    if (changed == 0) {
      // Fixed point: no row wants to move against the means of the current assignment.
      result.centroids = std::move(step.centroids);
      result.trace.push_back({t, obj.fit, obj.penalty, obj.total});
      result.converged = true;
      break;
    }
    const double previous = obj.total;
    result.assignment = std::move(step.assignment);
    result.centroids = update_centroids(x, result.assignment);
    obj = kmeans_objective(x, result.assignment, result.centroids, cfg.gamma);
    result.trace.push_back({t, obj.fit, obj.penalty, obj.total});
    if (previous - obj.total <= cfg.rel_tol * std::abs(previous)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace balclust
