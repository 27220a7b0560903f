#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "balclust/types.hpp"

namespace balclust {

/// Raised for malformed CSV input. The message names the offending row/column.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvOptions {
  bool has_header = false;
  /// Zero-based column holding class labels; removed from the features.
  std::optional<int> label_column;
};

struct LabeledData {
  DataMatrix data;
  std::optional<Assignment> labels;
};

/// Rows are samples. Labels (ints or strings) are re-indexed to [0, C) in first-appearance order.
LabeledData parse_csv(std::string_view text, const CsvOptions& options = {});
LabeledData load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// One row per sample, shortest round-trip representation of each value.
std::string to_csv(const Eigen::MatrixXd& samples_by_column);
void save_csv(const DataMatrix& data, const std::filesystem::path& path);

struct BlobSpec {
  int clusters = 2;
  int per_cluster = 10;
  int dim = 2;
  double spread = 1.0;      // isotropic standard deviation around each center
  double separation = 10.0; // minimum pairwise center distance
};

/// Exactly balanced Gaussian blobs with ground-truth labels. Sample order is cluster-major.
LabeledData generate_blobs(const BlobSpec& spec, RngSeed seed);

enum class InitMode { uniform_random, balanced_random };

/// Random starting assignment with no empty cluster. Throws if n < k.
Assignment init_assignment(Index n, int k, InitMode mode, RngSeed seed);

const char* to_string(InitMode mode);
InitMode init_mode_from_string(std::string_view name);

}  // namespace balclust
