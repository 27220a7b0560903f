#include "balclust/affinity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "balclust/dataset.hpp"

namespace balclust {
namespace {

Eigen::MatrixXd pairwise_squared_distances(const DataMatrix& x) {
  const Index n = x.size();
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (Index f = 0; f < x.dim(); ++f) {
        const double diff = x(f, i) - x(f, j);
        s += diff * diff;
      }
      d2(i, j) = s;
      d2(j, i) = s;
    }
  }
  return d2;
}

NeighborLists knn_from_distances(const Eigen::MatrixXd& d2, int k) {
  const Index n = d2.rows();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("neighbor count must be in [1, n-1] (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  NeighborLists lists(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    Index p = 0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) order[static_cast<std::size_t>(p++)] = j;
    }
    auto closer = [&](Index a, Index b) {
      return d2(i, a) != d2(i, b) ? d2(i, a) < d2(i, b) : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
    lists[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k);
  }
  return lists;
}

}  // namespace

AffinityMatrix::AffinityMatrix(Eigen::MatrixXd weights, int neighbor_count)
    : weights_(std::move(weights)), neighbor_count_(neighbor_count) {
  if (weights_.rows() != weights_.cols() || weights_.rows() < 1) {
    throw std::invalid_argument("affinity matrix must be square and non-empty");
  }
  for (Index i = 0; i < weights_.rows(); ++i) {
    if (weights_(i, i) != 0.0) throw std::invalid_argument("affinity diagonal must be zero");
    for (Index j = 0; j < weights_.cols(); ++j) {
      const double w = weights_(i, j);
      if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("affinity entries must lie in [0, 1]");
      }
      if (w != weights_(j, i)) throw std::invalid_argument("affinity matrix must be symmetric");
    }
  }
}

ScaleMode ScaleMode::global(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("global kernel scale must be positive");
  }
  return {Kind::global, delta};
}

ScaleMode scale_mode_from_string(std::string_view text) {
  if (text == "self" || text == "self_tuning") return ScaleMode::self_tuning();
  constexpr std::string_view prefix = "global:";
  if (text.substr(0, prefix.size()) == prefix) {
    auto rest = text.substr(prefix.size());
    double delta = 0.0;
    auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), delta);
    if (ec == std::errc() && end == rest.data() + rest.size()) return ScaleMode::global(delta);
  }
  throw std::invalid_argument("scale must be 'self' or 'global:<delta>', got '" +
                              std::string(text) + "'");
}

std::string to_string(const ScaleMode& mode) {
  if (mode.kind == ScaleMode::Kind::self_tuning) return "self";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), mode.delta);
  return "global:" + std::string(buf, res.ptr);
}

NeighborLists knn_sets(const DataMatrix& x, int k) {
  if (k < 1 || k > x.size() - 1) {
    throw std::invalid_argument("neighbor count must be in [1, n-1] (k=" + std::to_string(k) +
                                ", n=" + std::to_string(x.size()) + ")");
  }
  return knn_from_distances(pairwise_squared_distances(x), k);
}

AffinityMatrix build_affinity(const DataMatrix& x, int k, const ScaleMode& scale,
                              Symmetrization sym) {
  const Index n = x.size();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("neighbor count must be in [1, n-1] (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  const auto d2 = pairwise_squared_distances(x);
  const auto neighbors = knn_from_distances(d2, k);

  std::vector<double> local(static_cast<std::size_t>(n), 0.0);
  if (scale.kind == ScaleMode::Kind::self_tuning) {
    double smallest_positive = 0.0;
    for (Index i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      local[si] = std::sqrt(d2(i, neighbors[si].back()));
      if (local[si] > 0.0 && (smallest_positive == 0.0 || local[si] < smallest_positive)) {
        smallest_positive = local[si];
      }
    }
    if (smallest_positive == 0.0) {
      throw std::invalid_argument("degenerate dataset: all points coincide");
    }
    for (auto& s : local) {
      if (s == 0.0) s = smallest_positive;
    }
  } else if (!(scale.delta > 0.0)) {
    throw std::invalid_argument("global kernel scale must be positive");
  }

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j : neighbors[static_cast<std::size_t>(i)]) {
      const double denom = scale.kind == ScaleMode::Kind::global
                               ? scale.delta * scale.delta
                               : local[static_cast<std::size_t>(i)] *
                                     local[static_cast<std::size_t>(j)];
      raw(i, j) = std::exp(-d2(i, j) / denom);
    }
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = sym == Symmetrization::either ? std::max(raw(i, j), raw(j, i))
                                                     : std::min(raw(i, j), raw(j, i));
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return AffinityMatrix(std::move(w), k);
}

DegreeVector degree_vector(const AffinityMatrix& a) {
  DegreeVector d(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (Index j = 0; j < a.size(); ++j) s += a(i, j);
    d(i) = s;
  }
  return d;
}

CutValue cut_value(const AffinityMatrix& a, const Assignment& labels) {
  if (labels.size() != a.size()) {
    throw std::invalid_argument("assignment has " + std::to_string(labels.size()) +
                                " labels but affinity is " + std::to_string(a.size()) + "x" +
                                std::to_string(a.size()));
  }
  const auto degrees = degree_vector(a);
  std::vector<double> within_k(static_cast<std::size_t>(labels.k()), 0.0);
  std::vector<double> volume_k(static_cast<std::size_t>(labels.k()), 0.0);
  for (Index i = 0; i < a.size(); ++i) {
    const auto li = static_cast<std::size_t>(labels[i]);
    volume_k[li] += degrees(i);
    for (Index j = 0; j < a.size(); ++j) {
      if (labels[j] == labels[i]) within_k[li] += a(i, j);
    }
  }
  CutValue v;
  for (std::size_t c = 0; c < within_k.size(); ++c) {
    v.within += within_k[c];
    v.cut += volume_k[c] - within_k[c];
  }
  return v;
}

void save_affinity_csv(const AffinityMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_csv(a.weights());  // symmetric, so column-per-row output is the matrix itself
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

AffinityMatrix load_affinity_csv(const std::filesystem::path& path, int neighbor_count) {
  auto parsed = load_csv(path);
  Eigen::MatrixXd w = parsed.data.values().transpose();
  if (w.rows() != w.cols()) {
    throw CsvError("affinity CSV must be square, got " + std::to_string(w.rows()) + "x" +
                   std::to_string(w.cols()));
  }
  return AffinityMatrix(std::move(w), neighbor_count);
}

}  // namespace balclust
