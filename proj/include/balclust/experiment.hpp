#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "balclust/affinity.hpp"
#include "balclust/dataset.hpp"
#include "balclust/metrics.hpp"
#include "balclust/mincut.hpp"

namespace balclust {

enum class Algorithm { balanced_kmeans, balanced_mincut };
enum class SelectionCriterion { acc, nmi };
enum class ReportFormat { json, csv };

struct CsvSource {
  std::filesystem::path path;
  bool has_header = false;
  std::optional<int> label_column;
};

struct BlobSource {
  BlobSpec spec;
  RngSeed seed{};
};

using DatasetSource = std::variant<CsvSource, BlobSource>;

/// The seven-point gamma grid 1e-6, 1e-4, ..., 1e6.
std::vector<double> default_gamma_grid();
std::vector<std::uint64_t> default_seeds(int count = 10);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::balanced_kmeans;
  DatasetSource dataset = BlobSource{};
  int clusters = 2;
  std::vector<double> gammas{0.0};
  bool grid = false;  // select the best gamma across `gammas`
  int neighbors = 5;
  ScaleMode scale = ScaleMode::self_tuning();
  std::vector<std::uint64_t> seeds = default_seeds();
  InitMode init = InitMode::uniform_random;
  bool repair_empty = false;  // min-cut only
  SelectionCriterion select = SelectionCriterion::acc;
  int max_iters = 300;
  ShiftPolicy shift = ShiftPolicy::adaptive;  // min-cut only
};

/// One objective record. `primary` is the fit term for k-means and the within-cluster
/// weight for min-cut; `shifted` is only present for min-cut.
struct TraceRow {
  int iteration = 0;
  double primary = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  std::optional<double> shifted;
};

struct SeedRun {
  std::uint64_t seed = 0;
  double gamma = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
  MetricsReport metrics;
  double wall_ms = 0.0;
  std::vector<std::string> warnings;
};

/// Population mean/standard deviation across seeds.
struct Aggregate {
  std::optional<double> acc_mean, acc_std;
  std::optional<double> nmi_mean, nmi_std;
  double size_stddev_mean = 0.0;
  double penalty_mean = 0.0;
};

struct GammaBlock {
  double gamma = 0.0;
  std::vector<SeedRun> runs;
  Aggregate aggregate;
};

struct Selection {
  SelectionCriterion criterion = SelectionCriterion::acc;
  double best_gamma = 0.0;
  std::size_t best_index = 0;
};

struct RunReport {
  ExperimentConfig config;
  Index samples = 0;
  Index features = 0;
  bool has_labels = false;
  std::vector<GammaBlock> blocks;  // ascending gamma
  std::optional<Selection> selection;
};

Aggregate aggregate_runs(const std::vector<SeedRun>& runs);

LabeledData load_dataset(const DatasetSource& source);

/// Every (gamma, seed) pair of the config; blocks sorted by ascending gamma.
RunReport run_experiment(const ExperimentConfig& cfg);
RunReport run_experiment(const ExperimentConfig& cfg, const LabeledData& data);

/// run_experiment plus selection of the gamma with the best mean ACC (or NMI);
/// ties go to the smaller gamma. Throws if the dataset has no labels.
RunReport grid_search(const ExperimentConfig& cfg);
RunReport grid_search(const ExperimentConfig& cfg, const LabeledData& data);

Selection select_best(const RunReport& report, SelectionCriterion criterion);

/// Stable key order, "schema_version": 1. Wall times can be left out for byte comparisons.
std::string report_to_json(const RunReport& report, bool include_wall_time = true);
RunReport report_from_json(std::string_view text);

/// Flat per-seed rows: seed,gamma,acc,nmi,penalty,iterations,wall_ms.
std::string report_to_csv(const RunReport& report);

/// gamma vs mean/std ACC and NMI, ascending gamma: the sensitivity-plot data.
std::string sweep_to_csv(const RunReport& report);

void emit_report(const RunReport& report, const std::filesystem::path& path,
                 ReportFormat format);

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);
const char* to_string(SelectionCriterion c);
SelectionCriterion criterion_from_string(std::string_view name);
ReportFormat format_from_string(std::string_view name);

}  // namespace balclust
