#include <gtest/gtest.h>

#include <algorithm>

#include "balclust/oracle.hpp"

using namespace balclust;
using namespace balclust::oracle;

TEST(OracleKmeans, Examples) {
  Eigen::MatrixXd x(1, 4);
  x << 0, 1, 10, 11;
  auto best = exhaustive_kmeans_optimum(x, 2, 0.0);
  EXPECT_EQ(best.labels, (std::vector<Label>{0, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(best.total, 1.0);

  auto balanced = exhaustive_kmeans_optimum(x, 2, 1e6);
  EXPECT_EQ(std::count(balanced.labels.begin(), balanced.labels.end(), 0), 2);

  Eigen::MatrixXd single(2, 1);
  single << 3, -4;
  EXPECT_EQ(exhaustive_kmeans_optimum(single, 1, 5.0).total, 5.0);
  EXPECT_EQ(exhaustive_kmeans_optimum(single, 1, 0.0).total, 0.0);
}

TEST(OracleKmeans, BudgetIsEnforced) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 20);
  EXPECT_THROW(exhaustive_kmeans_optimum(x, 3, 0.0), std::length_error);
  EXPECT_NO_THROW(exhaustive_kmeans_optimum(x.leftCols(8), 3, 0.0, {6561}));
  EXPECT_THROW(exhaustive_kmeans_optimum(x.leftCols(8), 3, 0.0, {6560}), std::length_error);
}

TEST(OracleMincut, Examples) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  auto together = exhaustive_mincut_optimum(a, 2, 0.0);
  EXPECT_EQ(together.labels, (std::vector<Label>{0, 0}));
  EXPECT_EQ(together.total, 2.0);

  auto split = exhaustive_mincut_optimum(a, 2, 10.0);
  EXPECT_EQ(split.labels, (std::vector<Label>{0, 1}));
  EXPECT_EQ(split.total, -20.0);

  auto zero = exhaustive_mincut_optimum(Eigen::MatrixXd::Zero(4, 4), 2, 0.5);
  EXPECT_EQ(std::count(zero.labels.begin(), zero.labels.end(), 0), 2);
  EXPECT_EQ(zero.total, -4.0);
}

TEST(OracleAccuracy, Examples) {
  EXPECT_EQ(brute_force_accuracy({0, 1, 2, 2}, {0, 0, 1, 1}), 0.75);
  EXPECT_EQ(brute_force_accuracy({2, 0, 1}, {2, 0, 1}), 1.0);
  EXPECT_EQ(brute_force_accuracy({0, 0, 0, 0}, {0, 0, 1, 1}), 0.5);
  EXPECT_THROW(brute_force_accuracy({0, 1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0, 0, 0}),
               std::length_error);
}

TEST(OracleCompositions, SmallCases) {
  EXPECT_EQ(min_square_sum_by_enumeration(7, 3), 17);
  EXPECT_EQ(min_square_sum_by_enumeration(4, 2), 8);
  EXPECT_EQ(min_square_sum_by_enumeration(0, 2), 0);
  EXPECT_EQ(min_square_sum_by_enumeration(5, 1), 25);
}
