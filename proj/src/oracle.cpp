#include "balclust/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace balclust::oracle {
namespace {

std::uint64_t state_count(Index n, int k, EnumerationBudget budget) {
  std::uint64_t states = 1;
  for (Index i = 0; i < n; ++i) {
    states *= static_cast<std::uint64_t>(k);
    if (states > budget.max_states) {
      throw std::length_error("enumeration of " + std::to_string(k) + "^" + std::to_string(n) +
                              " states exceeds budget of " + std::to_string(budget.max_states));
    }
  }
  return states;
}

// Labeling number `code` in base k, most significant digit first, so increasing codes
// are lexicographic order.
void decode(std::uint64_t code, int k, std::vector<Label>& labels) {
  for (auto i = labels.size(); i-- > 0;) {
    labels[i] = static_cast<Label>(code % static_cast<std::uint64_t>(k));
    code /= static_cast<std::uint64_t>(k);
  }
}

double square_sum_of_sizes(const std::vector<Label>& labels, int k) {
  std::vector<double> n(static_cast<std::size_t>(k), 0.0);
  for (Label l : labels) n[static_cast<std::size_t>(l)] += 1.0;
  double s = 0.0;
  for (double c : n) s += c * c;
  return s;
}

double kmeans_total(const Eigen::MatrixXd& x, const std::vector<Label>& labels, int k,
                    double gamma) {
  // Empty clusters own no samples, so their centers never enter the fit term.
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(x.rows(), k);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(k);
  for (Index i = 0; i < x.cols(); ++i) {
    sum.col(labels[static_cast<std::size_t>(i)]) += x.col(i);
    count(labels[static_cast<std::size_t>(i)]) += 1.0;
  }
  double fit = 0.0;
  for (Index i = 0; i < x.cols(); ++i) {
    const Label l = labels[static_cast<std::size_t>(i)];
    fit += (x.col(i) - sum.col(l) / count(l)).squaredNorm();
  }
  return fit + gamma * square_sum_of_sizes(labels, k);
}

double mincut_total(const Eigen::MatrixXd& a, const std::vector<Label>& labels, int k,
                    double gamma) {
  double within = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
        within += a(i, j);
      }
    }
  }
  return within - gamma * square_sum_of_sizes(labels, k);
}

Optimum enumerate(Index n, int k, EnumerationBudget budget, bool maximize,
                  const std::function<double(const std::vector<Label>&)>& objective) {
  if (k < 1) throw std::invalid_argument("cluster count must be at least 1");
  const auto states = state_count(n, k, budget);
  std::vector<Label> labels(static_cast<std::size_t>(n));
  Optimum best{{}, maximize ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity()};
  for (std::uint64_t code = 0; code < states; ++code) {
    decode(code, k, labels);
    const double value = objective(labels);
    const double slack = 1e-12 * std::max(1.0, std::abs(best.total));
    const bool better = maximize ? value > best.total + slack : value < best.total - slack;
    if (better || best.labels.empty()) {
      best.labels = labels;
      best.total = value;
    }
  }
  return best;
}

std::vector<Label> densify(const std::vector<Label>& labels, int& distinct) {
  std::map<Label, Label> ids;
  std::vector<Label> out;
  out.reserve(labels.size());
  for (Label l : labels) {
    auto [it, inserted] = ids.try_emplace(l, static_cast<Label>(ids.size()));
    out.push_back(it->second);
  }
  distinct = static_cast<int>(ids.size());
  return out;
}

}  // namespace

Optimum exhaustive_kmeans_optimum(const Eigen::MatrixXd& x, int k, double gamma,
                                  EnumerationBudget budget) {
  return enumerate(x.cols(), k, budget, false,
                   [&](const std::vector<Label>& l) { return kmeans_total(x, l, k, gamma); });
}

Optimum exhaustive_mincut_optimum(const Eigen::MatrixXd& a, int k, double gamma,
                                  EnumerationBudget budget) {
  return enumerate(a.rows(), k, budget, true,
                   [&](const std::vector<Label>& l) { return mincut_total(a, l, k, gamma); });
}

double brute_force_accuracy(const std::vector<Label>& pred, const std::vector<Label>& truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("label length mismatch");
  if (pred.empty()) return 0.0;
  int cp = 0;
  int ct = 0;
  const auto p = densify(pred, cp);
  const auto t = densify(truth, ct);
  if (cp > 6 || ct > 6) throw std::length_error("brute-force accuracy supports at most 6 labels");

  // perm[l] is the class given to predicted label l; values >= ct mean "unmatched".
  const int m = std::max(cp, ct);
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (perm[static_cast<std::size_t>(p[i])] == t[i]) ++hits;
    }
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(p.size());
}

std::int64_t min_square_sum_by_enumeration(int n, int k) {
  if (n < 0 || k < 1) throw std::invalid_argument("need n >= 0 and k >= 1");
  // Recursive walk over every composition (ordered, zeros allowed).
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::function<void(int, int, std::int64_t)> walk = [&](int left, int parts, std::int64_t acc) {
    if (parts == 1) {
      best = std::min(best, acc + static_cast<std::int64_t>(left) * left);
      return;
    }
    for (int first = 0; first <= left; ++first) {
      walk(left - first, parts - 1, acc + static_cast<std::int64_t>(first) * first);
    }
  };
  walk(n, k, 0);
  return best;
}

}  // namespace balclust::oracle
