#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "balclust/dataset.hpp"
#include "test_support.hpp"

using namespace balclust;

TEST(DataMatrix, RejectsNonFiniteAndEmpty) {
  Eigen::MatrixXd m(1, 2);
  m << 1.0, std::nan("");
  EXPECT_THROW(DataMatrix{m}, std::invalid_argument);
  EXPECT_THROW(DataMatrix{Eigen::MatrixXd(0, 3)}, std::invalid_argument);
}

TEST(Assignment, RejectsOutOfRangeLabels) {
  EXPECT_THROW(Assignment({0, 2}, 2), std::invalid_argument);
  EXPECT_THROW(Assignment({0, -1}, 2), std::invalid_argument);
  EXPECT_THROW(Assignment({0}, 0), std::invalid_argument);
}

TEST(Assignment, OneHotHasUnitRowSums) {
  auto a = fixtures::labels({2, 0, 1, 2}, 3);
  auto f = a.one_hot();
  EXPECT_EQ(f.rows(), 4);
  EXPECT_EQ(f.cols(), 3);
  EXPECT_TRUE((f.rowwise().sum().array() == 1.0).all());
  EXPECT_EQ(f(0, 2), 1.0);
}

TEST(ClusterSizes, Counts) {
  EXPECT_EQ(cluster_sizes(fixtures::labels({0, 0, 1, 1}, 2)).counts,
            (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(cluster_sizes(fixtures::labels({0, 0, 0, 0}, 2)).counts,
            (std::vector<std::int64_t>{4, 0}));
  EXPECT_EQ(cluster_sizes(fixtures::labels({2, 1, 0}, 3)).counts,
            (std::vector<std::int64_t>{1, 1, 1}));
}

TEST(Csv, TransposesRowsIntoSampleColumns) {
  auto parsed = parse_csv("1,2\n3,4\n5,6\n");
  EXPECT_EQ(parsed.data.dim(), 2);
  EXPECT_EQ(parsed.data.size(), 3);
  EXPECT_EQ(parsed.data(0, 0), 1.0);
  EXPECT_EQ(parsed.data(1, 0), 2.0);
  EXPECT_FALSE(parsed.labels.has_value());
}

TEST(Csv, LabelColumnIsDensifiedInFirstAppearanceOrder) {
  auto parsed = parse_csv("1,2\n3,4\n5,6", {false, 1});
  EXPECT_EQ(parsed.data.dim(), 1);
  EXPECT_EQ(parsed.data.size(), 3);
  ASSERT_TRUE(parsed.labels);
  EXPECT_EQ(parsed.labels->labels(), (std::vector<Label>{0, 1, 2}));

  auto words = parse_csv("x,label\n0.5,cat\n1.5,dog\n2.5,cat\n", {true, 1});
  EXPECT_EQ(words.labels->labels(), (std::vector<Label>{0, 1, 0}));
  EXPECT_EQ(words.labels->k(), 2);
}

TEST(Csv, ParseErrorNamesTheCell) {
  try {
    parse_csv("1,2\n3,abc\n");
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("abc"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_NE(msg.find("column 1"), std::string::npos);
  }
}

TEST(Csv, RejectsRaggedEmptyAndNonFinite) {
  EXPECT_THROW(parse_csv("1,2\n3\n"), CsvError);
  EXPECT_THROW(parse_csv(""), CsvError);
  EXPECT_THROW(parse_csv("a,b\n", {true, {}}), CsvError);
  EXPECT_THROW(parse_csv("1,inf\n"), CsvError);
  EXPECT_THROW(parse_csv("1,2\n", {false, 5}), CsvError);
  EXPECT_THROW(load_csv("/nonexistent/file.csv"), std::runtime_error);
}

TEST(Csv, HandlesCrlfHeaderAndTrailingBlankLines) {
  auto parsed = parse_csv("a,b\r\n1.5,-2e3\r\n\r\n", {true, {}});
  EXPECT_EQ(parsed.data.size(), 1);
  EXPECT_EQ(parsed.data(1, 0), -2000.0);
}

TEST(Csv, ReserializationIsLossless) {
  std::mt19937_64 rng(3);
  auto x = fixtures::random_data(rng, 3, 25, 1e3);
  auto back = parse_csv(to_csv(x.values()));
  EXPECT_EQ(back.data.values(), x.values());

  const std::string path = std::string(BALCLUST_TEST_TMP) + "/roundtrip.csv";
  save_csv(x, path);
  EXPECT_EQ(load_csv(path).data.values(), x.values());
}

TEST(Blobs, BalancedAndDeterministic) {
  auto a = generate_blobs({2, 5, 1, 1.0, 10.0}, RngSeed{7});
  auto b = generate_blobs({2, 5, 1, 1.0, 10.0}, RngSeed{7});
  EXPECT_EQ(a.data.size(), 10);
  EXPECT_EQ(cluster_sizes(*a.labels).counts, (std::vector<std::int64_t>{5, 5}));
  EXPECT_EQ(a.data.values(), b.data.values());
  EXPECT_EQ(*a.labels, *b.labels);
  auto c = generate_blobs({2, 5, 1, 1.0, 10.0}, RngSeed{8});
  EXPECT_NE(a.data.values(), c.data.values());
}

TEST(Blobs, CentersRespectSeparation) {
  // Tiny spread: sample means sit on the centers, so the separation is visible in the data.
  auto blobs = generate_blobs({6, 40, 3, 1e-6, 5.0}, RngSeed{11});
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(3, 6);
  for (Index j = 0; j < blobs.data.size(); ++j) means.col((*blobs.labels)[j]) += blobs.data.sample(j) / 40.0;
  for (int p = 0; p < 6; ++p) {
    for (int q = p + 1; q < 6; ++q) EXPECT_GE((means.col(p) - means.col(q)).norm(), 5.0 - 1e-4);
  }
}

TEST(Blobs, RejectsBadSpec) {
  EXPECT_THROW(generate_blobs({0, 5, 1, 1.0, 1.0}, {}), std::invalid_argument);
  EXPECT_THROW(generate_blobs({2, 5, 1, 0.0, 1.0}, {}), std::invalid_argument);
  EXPECT_THROW(generate_blobs({2, 5, 1, 1.0, -1.0}, {}), std::invalid_argument);
}

TEST(InitAssignment, BalancedModeSplitsEvenly) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(cluster_sizes(init_assignment(4, 2, InitMode::balanced_random, {s})).counts,
              (std::vector<std::int64_t>{2, 2}));
    auto sizes = cluster_sizes(init_assignment(5, 2, InitMode::balanced_random, {s}));
    EXPECT_EQ(sizes.max(), 3);
    EXPECT_EQ(sizes.min(), 2);
  }
}

TEST(InitAssignment, UniformModeNeverLeavesEmptyClusters) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    EXPECT_GT(cluster_sizes(init_assignment(10, 3, InitMode::uniform_random, {s})).min(), 0);
    // n == K forces the repair path almost every time.
    EXPECT_EQ(cluster_sizes(init_assignment(4, 4, InitMode::uniform_random, {s})).min(), 1);
  }
}

TEST(InitAssignment, RejectsTooFewSamples) {
  EXPECT_THROW(init_assignment(2, 3, InitMode::uniform_random, {}), std::invalid_argument);
}

TEST(InitAssignment, PropertyBalancedSpreadAtMostOneAndDeterministic) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = std::uniform_int_distribution<int>(1, 8)(rng);
    const Index n = std::uniform_int_distribution<Index>(k, 60)(rng);
    const RngSeed seed{rng()};
    const auto mode = trial % 2 ? InitMode::balanced_random : InitMode::uniform_random;
    auto a = init_assignment(n, k, mode, seed);
    EXPECT_EQ(a, init_assignment(n, k, mode, seed));
    auto sizes = cluster_sizes(a);
    EXPECT_EQ(sizes.total(), n);
    EXPECT_GT(sizes.min(), 0);
    if (mode == InitMode::balanced_random) EXPECT_LE(sizes.max() - sizes.min(), 1);
  }
}
