// Command-line harness: run balanced k-means or balanced min-cut on a CSV dataset or
// synthetic blobs, optionally grid-searching gamma, and write a JSON or CSV report.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "balclust/experiment.hpp"

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || end != item.data() + item.size()) {
      throw std::invalid_argument(std::string("bad ") + what + " value '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string("empty ") + what + " list");
  return out;
}

balclust::BlobSource parse_blobs(const std::string& text, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 5) {
    throw std::invalid_argument("--blobs expects K:per:d:spread:sep, got '" + text + "'");
  }
  balclust::BlobSource src;
  src.spec.clusters = std::stoi(parts[0]);
  src.spec.per_cluster = std::stoi(parts[1]);
  src.spec.dim = std::stoi(parts[2]);
  src.spec.spread = std::stod(parts[3]);
  src.spec.separation = std::stod(parts[4]);
  src.seed = balclust::RngSeed{seed};
  return src;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced clustering with an exclusive-lasso size penalty"};

  std::string algorithm = "kmeans";
  std::string data_path;
  std::string blobs;
  std::uint64_t blob_seed = 0;
  bool header = false;
  int labels_col = -1;
  int clusters = 0;
  std::string gamma = "0";
  std::string gamma_grid;
  bool default_grid = false;
  int neighbors = 5;
  std::string scale = "self";
  std::string seeds;
  std::string out_path;
  std::string format = "json";
  std::string sweep_out;
  std::string export_affinity;
  bool repair_empty = false;
  std::string init = "uniform";
  std::string select = "acc";
  std::string shift = "adaptive";
  int max_iters = 300;

  app.add_option("--algorithm", algorithm, "kmeans | mincut (balanced_kmeans | balanced_mincut)");
  auto* data_opt = app.add_option("--data", data_path, "CSV file, one sample per row");
  auto* blobs_opt = app.add_option("--blobs", blobs, "synthetic blobs K:per:d:spread:sep");
  data_opt->excludes(blobs_opt);
  app.add_option("--blob-seed", blob_seed, "seed for --blobs data generation");
  app.add_flag("--header", header, "CSV has a header row");
  app.add_option("--labels-col", labels_col, "zero-based label column in the CSV");
  app.add_option("--k", clusters, "number of clusters")->required();
  auto* gamma_opt = app.add_option("--gamma", gamma, "single penalty weight");
  auto* grid_opt = app.add_option("--gamma-grid", gamma_grid, "comma-separated gamma values");
  auto* default_opt = app.add_flag("--default-grid", default_grid, "use 1e-6,1e-4,...,1e6");
  gamma_opt->excludes(grid_opt)->excludes(default_opt);
  grid_opt->excludes(default_opt);
  app.add_option("--neighbors", neighbors, "kNN graph neighbors (min-cut)");
  app.add_option("--scale", scale, "kernel scale: self | global:<delta>");
  app.add_option("--seeds", seeds, "comma-separated initialization seeds (default 0..9)");
  app.add_option("--out", out_path, "report path (stdout if omitted)");
  app.add_option("--format", format, "json | csv");
  app.add_option("--sweep-out", sweep_out, "write gamma sweep CSV here (grid mode)");
  app.add_option("--export-affinity", export_affinity, "write the affinity matrix as CSV");
  app.add_flag("--repair-empty", repair_empty, "min-cut: fill empty clusters after convergence");
  app.add_option("--init", init, "uniform | balanced");
  app.add_option("--select", select, "grid selection criterion: acc | nmi");
  app.add_option("--shift", shift, "min-cut shift policy: adaptive | fixed");
  app.add_option("--max-iters", max_iters, "iteration cap");

  CLI11_PARSE(app, argc, argv);

  try {
    balclust::ExperimentConfig cfg;
    cfg.algorithm = balclust::algorithm_from_string(algorithm);
    if (!data_path.empty()) {
      balclust::CsvSource csv{data_path, header, std::nullopt};
      if (labels_col >= 0) csv.label_column = labels_col;
      cfg.dataset = csv;
    } else if (!blobs.empty()) {
      cfg.dataset = parse_blobs(blobs, blob_seed);
    } else {
      throw std::invalid_argument("one of --data or --blobs is required");
    }
    cfg.clusters = clusters;
    if (default_grid) {
      cfg.gammas = balclust::default_gamma_grid();
      cfg.grid = true;
    } else if (!gamma_grid.empty()) {
      cfg.gammas = parse_list<double>(gamma_grid, "gamma");
      cfg.grid = true;
    } else {
      cfg.gammas = parse_list<double>(gamma, "gamma");
    }
    cfg.neighbors = neighbors;
    cfg.scale = balclust::scale_mode_from_string(scale);
    if (!seeds.empty()) cfg.seeds = parse_list<std::uint64_t>(seeds, "seed");
    cfg.init = balclust::init_mode_from_string(init);
    cfg.repair_empty = repair_empty;
    cfg.select = balclust::criterion_from_string(select);
    if (shift != "adaptive" && shift != "fixed") {
      throw std::invalid_argument("--shift must be adaptive or fixed");
    }
    cfg.shift = shift == "fixed" ? balclust::ShiftPolicy::fixed : balclust::ShiftPolicy::adaptive;
    cfg.max_iters = max_iters;
    const auto report_format = balclust::format_from_string(format);

    const auto data = balclust::load_dataset(cfg.dataset);
    if (!export_affinity.empty()) {
      balclust::save_affinity_csv(balclust::build_affinity(data.data, neighbors, cfg.scale),
                                  export_affinity);
    }

    balclust::RunReport report;
    if (cfg.grid && data.labels) {
      report = balclust::grid_search(cfg, data);
    } else {
      if (cfg.grid) std::cerr << "warning: no labels, gamma grid is run without selection\n";
      report = balclust::run_experiment(cfg, data);
    }

    if (out_path.empty()) {
      std::cout << (report_format == balclust::ReportFormat::json
                        ? balclust::report_to_json(report)
                        : balclust::report_to_csv(report));
    } else {
      balclust::emit_report(report, out_path, report_format);
    }
    if (!sweep_out.empty()) write_text(sweep_out, balclust::sweep_to_csv(report));

    for (const auto& b : report.blocks) {
      std::cerr << "gamma=" << b.gamma;
      if (b.aggregate.acc_mean) {
        std::cerr << " acc=" << *b.aggregate.acc_mean << "+-" << *b.aggregate.acc_std
                  << " nmi=" << *b.aggregate.nmi_mean << "+-" << *b.aggregate.nmi_std;
      }
      std::cerr << " size_std=" << b.aggregate.size_stddev_mean << "\n";
    }
    if (report.selection) std::cerr << "best gamma=" << report.selection->best_gamma << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
