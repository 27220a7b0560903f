#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "balclust/metrics.hpp"
#include "balclust/oracle.hpp"
#include "test_support.hpp"

using namespace balclust;
using fixtures::labels;

namespace {

// Mutual information over entropies, evaluated cell by cell from the counts.
double direct_nmi(const std::vector<Label>& p, const std::vector<Label>& t) {
  const double n = static_cast<double>(p.size());
  const int kp = *std::max_element(p.begin(), p.end()) + 1;
  const int kt = *std::max_element(t.begin(), t.end()) + 1;
  std::vector<std::vector<double>> c(kp, std::vector<double>(kt, 0.0));
  std::vector<double> rp(kp, 0.0), rt(kt, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    c[p[i]][t[i]] += 1;
    rp[p[i]] += 1;
    rt[t[i]] += 1;
  }
  double mi = 0, hp = 0, ht = 0;
  for (int l = 0; l < kp; ++l) {
    for (int h = 0; h < kt; ++h) {
      if (c[l][h] > 0) mi += c[l][h] / n * std::log(n * c[l][h] / (rp[l] * rt[h]));
    }
  }
  for (double v : rp) if (v > 0) hp -= v / n * std::log(v / n);
  for (double v : rt) if (v > 0) ht -= v / n * std::log(v / n);
  return mi / std::sqrt(hp * ht);
}

Assignment relabel(const Assignment& a, std::mt19937_64& rng) {
  std::vector<Label> perm(static_cast<std::size_t>(a.k()));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Label> out;
  for (Label l : a.labels()) out.push_back(perm[static_cast<std::size_t>(l)]);
  return Assignment(out, a.k());
}

}  // namespace

TEST(Contingency, Examples) {
  auto t = contingency_table(labels({0, 0, 1}, 2), labels({0, 1, 1}, 2));
  EXPECT_EQ(t.counts, (std::vector<std::vector<std::int64_t>>{{1, 1}, {0, 1}}));
  EXPECT_EQ(t.row_sums, (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(t.col_sums, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(t.n, 3);

  auto id = contingency_table(labels({0, 1, 2}, 3), labels({0, 1, 2}, 3));
  EXPECT_EQ(id.counts, (std::vector<std::vector<std::int64_t>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));

  auto one = contingency_table(labels({0, 0, 0, 0}, 1), labels({0, 1, 0, 1}, 2));
  EXPECT_EQ(one.counts, (std::vector<std::vector<std::int64_t>>{{2, 2}}));
  EXPECT_THROW(contingency_table(labels({0, 0}, 1), labels({0}, 1)), std::invalid_argument);
}

TEST(Accuracy, Examples) {
  EXPECT_EQ(accuracy(labels({0, 0, 1, 1}, 2), labels({1, 1, 0, 0}, 2)), 1.0);
  EXPECT_EQ(accuracy(labels({0, 1, 2, 2}, 3), labels({0, 0, 1, 1}, 2)), 0.75);
  EXPECT_EQ(accuracy(labels({0, 1}, 2), labels({0, 0}, 1)), 0.5);
  EXPECT_EQ(oracle::brute_force_accuracy({0, 1, 2, 2}, {0, 0, 1, 1}), 0.75);
}

TEST(Accuracy, PropertyMatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int kp = std::uniform_int_distribution<int>(1, 6)(rng);
    const int kt = std::uniform_int_distribution<int>(1, 6)(rng);
    const Index n = std::uniform_int_distribution<Index>(1, 40)(rng);
    auto p = fixtures::random_labels(rng, n, kp);
    auto t = fixtures::random_labels(rng, n, kt);
    EXPECT_EQ(accuracy(p, t), oracle::brute_force_accuracy(p.labels(), t.labels()));
  }
}

TEST(Accuracy, PropertyRelabelingInvarianceAndSymmetry) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = std::uniform_int_distribution<int>(1, 7)(rng);
    auto p = fixtures::random_labels(rng, 50, k);
    auto t = fixtures::random_labels(rng, 50, k);
    const double acc = accuracy(p, t);
    EXPECT_EQ(accuracy(relabel(p, rng), relabel(t, rng)), acc);
    EXPECT_EQ(accuracy(t, p), acc);
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
  }
}

TEST(Nmi, Examples) {
  std::mt19937_64 rng(3);
  auto p = fixtures::random_labels(rng, 30, 4);
  EXPECT_EQ(nmi(p, relabel(p, rng)), 1.0);
  EXPECT_EQ(nmi(labels({0, 0, 1, 1}, 2), labels({0, 1, 0, 1}, 2)), 0.0);

  // Reference value from a separate direct evaluation of the formula.
  const double frozen = 0.5295405780575617;
  const double got = nmi(labels({0, 0, 1, 1, 2, 2}, 3), labels({0, 0, 0, 1, 1, 1}, 2));
  EXPECT_NEAR(got, frozen, 1e-10);
  EXPECT_NEAR(got, direct_nmi({0, 0, 1, 1, 2, 2}, {0, 0, 0, 1, 1, 1}), 1e-10);
}

TEST(Nmi, SingleClusterConvention) {
  EXPECT_EQ(nmi(labels({0, 0, 0}, 1), labels({0, 0, 0}, 2)), 1.0);
  EXPECT_EQ(nmi(labels({0, 0, 0}, 1), labels({0, 1, 0}, 2)), 0.0);
  EXPECT_EQ(nmi(labels({1, 0, 1}, 2), labels({0, 0, 0}, 1)), 0.0);
}

TEST(Nmi, PropertyMatchesDirectFormulaSymmetricAndBounded) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(2, 60)(rng);
    auto p = fixtures::random_labels(rng, n, std::uniform_int_distribution<int>(2, 6)(rng));
    auto t = fixtures::random_labels(rng, n, std::uniform_int_distribution<int>(2, 6)(rng));
    if (cluster_sizes(p).max() == n || cluster_sizes(t).max() == n) continue;
    const double v = nmi(p, t);
    EXPECT_NEAR(v, direct_nmi(p.labels(), t.labels()), 1e-10);
    EXPECT_NEAR(nmi(t, p), v, 1e-12);
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, 1.0 + 1e-12);
    EXPECT_NEAR(nmi(relabel(p, rng), relabel(t, rng)), v, 1e-12);
  }
}

TEST(Nmi, OneOnlyForIdenticalPartitions) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = fixtures::random_labels(rng, 12, 3);
    auto t = p.with_label(trial % 12, (p[trial % 12] + 1) % 3);
    EXPECT_LT(nmi(p, t), 1.0);
  }
}

TEST(Nmi, IndependentLargePartitionsNearZero) {
  std::mt19937_64 rng(6);
  auto p = fixtures::random_labels(rng, 10000, 5);
  auto t = fixtures::random_labels(rng, 10000, 5);
  EXPECT_LT(nmi(p, t), 0.1);
}

TEST(BalanceReport, Examples) {
  auto r1 = balance_report(labels({0, 0, 1, 1}, 2));
  EXPECT_EQ(r1.penalty_value, 8.0);
  EXPECT_EQ(r1.size_stddev, 0.0);
  EXPECT_TRUE(r1.is_perfectly_balanced);
  auto r2 = balance_report(labels({0, 0, 0, 1}, 2));
  EXPECT_EQ(r2.penalty_value, 10.0);
  EXPECT_EQ(r2.size_stddev, 1.0);
  EXPECT_FALSE(r2.is_perfectly_balanced);
  auto r3 = balance_report(labels({0, 1, 2}, 3));
  EXPECT_EQ(r3.penalty_value, 3.0);
  EXPECT_EQ(r3.size_stddev, 0.0);
  EXPECT_TRUE(r3.is_perfectly_balanced);
}

TEST(Evaluate, OmitsScoresWithoutTruth) {
  auto r = evaluate(labels({0, 1, 1}, 2), std::nullopt);
  EXPECT_FALSE(r.acc);
  EXPECT_FALSE(r.nmi);
  EXPECT_EQ(r.penalty_value, 5.0);
  auto with = evaluate(labels({0, 1, 1}, 2), labels({1, 0, 0}, 2));
  EXPECT_EQ(*with.acc, 1.0);
  EXPECT_EQ(*with.nmi, 1.0);
}
