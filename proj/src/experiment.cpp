#include "balclust/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "balclust/kmeans.hpp"
#include "json.hpp"

namespace balclust {
namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.clusters < 1) throw std::invalid_argument("cluster count must be at least 1");
  if (cfg.gammas.empty()) throw std::invalid_argument("gamma list must not be empty");
  if (cfg.seeds.empty()) throw std::invalid_argument("seed list must not be empty");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  for (double g : cfg.gammas) PenaltyWeight{g};
}

SeedRun run_kmeans(const ExperimentConfig& cfg, const LabeledData& data, double gamma,
                   std::uint64_t seed) {
  KmeansConfig kc;
  kc.gamma = PenaltyWeight(gamma);
  kc.max_outer_iters = cfg.max_iters;
  kc.seed = RngSeed{seed};
  kc.init_mode = cfg.init;

  SeedRun run{seed, gamma, 0, false, {}, {}, 0.0, {}};
  const auto start = std::chrono::steady_clock::now();
  auto fit = fit_balanced_kmeans(data.data, cfg.clusters, kc);
  run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  run.iterations = fit.iterations;
  run.converged = fit.converged;
  for (const auto& r : fit.trace) run.trace.push_back({r.iteration, r.fit, r.penalty, r.total, {}});
  run.metrics = evaluate(fit.assignment, data.labels);
  if (!fit.converged) run.warnings.push_back("stopped at the iteration cap before converging");
  return run;
}

SeedRun run_mincut(const ExperimentConfig& cfg, const LabeledData& data,
                   const AffinityMatrix& affinity, double gamma, std::uint64_t seed) {
  MincutConfig mc;
  mc.gamma = PenaltyWeight(gamma);
  mc.max_iters = cfg.max_iters;
  mc.seed = RngSeed{seed};
  mc.init_mode = cfg.init;
  mc.repair_empty = cfg.repair_empty;
  mc.scale = cfg.scale;
  mc.shift = cfg.shift;

  SeedRun run{seed, gamma, 0, false, {}, {}, 0.0, {}};
  const auto start = std::chrono::steady_clock::now();
  auto init = init_assignment(data.data.size(), cfg.clusters, cfg.init, mc.seed);
  auto fit = fit_balanced_mincut(affinity, std::move(init), mc);
  run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  run.iterations = fit.iterations;
  run.converged = fit.converged;
  for (const auto& r : fit.trace) {
    run.trace.push_back({r.iteration, r.within, r.penalty, r.total, r.shifted});
  }
  run.metrics = evaluate(fit.assignment, data.labels);
  if (!fit.converged) run.warnings.push_back("stopped at the iteration cap before converging");
  if (!fit.empty_clusters.empty()) {
    std::string msg = "empty clusters in the output:";
    for (int c : fit.empty_clusters) msg += " " + std::to_string(c);
    if (fit.repaired > 0) msg += " (repaired by moving " + std::to_string(fit.repaired) + " points)";
    run.warnings.push_back(msg);
  }
  return run;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["algorithm"] = to_string(cfg.algorithm);
  if (const auto* csv = std::get_if<CsvSource>(&cfg.dataset)) {
    j["dataset"] = {{"kind", "csv"},
                    {"path", csv->path.string()},
                    {"has_header", csv->has_header},
                    {"label_column", csv->label_column ? json(*csv->label_column) : json(nullptr)}};
  } else {
    const auto& blobs = std::get<BlobSource>(cfg.dataset);
    j["dataset"] = {{"kind", "blobs"},
                    {"clusters", blobs.spec.clusters},
                    {"per_cluster", blobs.spec.per_cluster},
                    {"dim", blobs.spec.dim},
                    {"spread", blobs.spec.spread},
                    {"separation", blobs.spec.separation},
                    {"seed", blobs.seed.value}};
  }
  j["clusters"] = cfg.clusters;
  j["gammas"] = cfg.gammas;
  j["grid"] = cfg.grid;
  j["neighbors"] = cfg.neighbors;
  j["scale"] = to_string(cfg.scale);
  j["seeds"] = cfg.seeds;
  j["init"] = to_string(cfg.init);
  j["repair_empty"] = cfg.repair_empty;
  j["select"] = to_string(cfg.select);
  j["max_iters"] = cfg.max_iters;
  j["shift"] = cfg.shift == ShiftPolicy::adaptive ? "adaptive" : "fixed";
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  const auto& ds = j.at("dataset");
  if (ds.at("kind") == "csv") {
    CsvSource csv;
    csv.path = ds.at("path").get<std::string>();
    csv.has_header = ds.at("has_header").get<bool>();
    if (!ds.at("label_column").is_null()) csv.label_column = ds.at("label_column").get<int>();
    cfg.dataset = csv;
  } else {
    BlobSource blobs;
    blobs.spec.clusters = ds.at("clusters").get<int>();
    blobs.spec.per_cluster = ds.at("per_cluster").get<int>();
    blobs.spec.dim = ds.at("dim").get<int>();
    blobs.spec.spread = ds.at("spread").get<double>();
    blobs.spec.separation = ds.at("separation").get<double>();
    blobs.seed.value = ds.at("seed").get<std::uint64_t>();
    cfg.dataset = blobs;
  }
  cfg.clusters = j.at("clusters").get<int>();
  cfg.gammas = j.at("gammas").get<std::vector<double>>();
  cfg.grid = j.at("grid").get<bool>();
  cfg.neighbors = j.at("neighbors").get<int>();
  cfg.scale = scale_mode_from_string(j.at("scale").get<std::string>());
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.init = init_mode_from_string(j.at("init").get<std::string>());
  cfg.repair_empty = j.at("repair_empty").get<bool>();
  cfg.select = criterion_from_string(j.at("select").get<std::string>());
  cfg.max_iters = j.at("max_iters").get<int>();
  cfg.shift = j.at("shift") == "fixed" ? ShiftPolicy::fixed : ShiftPolicy::adaptive;
  return cfg;
}

}  // namespace

std::vector<double> default_gamma_grid() { return {1e-6, 1e-4, 1e-2, 1e0, 1e2, 1e4, 1e6}; }

std::vector<std::uint64_t> default_seeds(int count) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(count, 0)));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

Aggregate aggregate_runs(const std::vector<SeedRun>& runs) {
  Aggregate agg;
  if (runs.empty()) return agg;
  std::vector<double> acc, nmi_values, stddev, penalty;
  for (const auto& r : runs) {
    if (r.metrics.acc) acc.push_back(*r.metrics.acc);
    if (r.metrics.nmi) nmi_values.push_back(*r.metrics.nmi);
    stddev.push_back(r.metrics.size_stddev);
    penalty.push_back(r.metrics.penalty_value);
  }
  if (acc.size() == runs.size()) {
    agg.acc_mean = mean_of(acc);
    agg.acc_std = std_of(acc, *agg.acc_mean);
  }
  if (nmi_values.size() == runs.size()) {
    agg.nmi_mean = mean_of(nmi_values);
    agg.nmi_std = std_of(nmi_values, *agg.nmi_mean);
  }
  agg.size_stddev_mean = mean_of(stddev);
  agg.penalty_mean = mean_of(penalty);
  return agg;
}

LabeledData load_dataset(const DatasetSource& source) {
  if (const auto* csv = std::get_if<CsvSource>(&source)) {
    return load_csv(csv->path, CsvOptions{csv->has_header, csv->label_column});
  }
  const auto& blobs = std::get<BlobSource>(source);
  return generate_blobs(blobs.spec, blobs.seed);
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, load_dataset(cfg.dataset));
}

RunReport run_experiment(const ExperimentConfig& cfg, const LabeledData& data) {
  validate(cfg);
  if (cfg.clusters > data.data.size()) {
    throw std::invalid_argument("K=" + std::to_string(cfg.clusters) + " exceeds the " +
                                std::to_string(data.data.size()) + " samples");
  }
  RunReport report;
  report.config = cfg;
  report.samples = data.data.size();
  report.features = data.data.dim();
  report.has_labels = data.labels.has_value();

  auto gammas = cfg.gammas;
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
  report.config.gammas = gammas;

  // The graph depends only on the data, so it is shared by every (gamma, seed) run.
  std::optional<AffinityMatrix> affinity;
  if (cfg.algorithm == Algorithm::balanced_mincut) {
    affinity = build_affinity(data.data, cfg.neighbors, cfg.scale);
  }

  for (double gamma : gammas) {
    GammaBlock block;
    block.gamma = gamma;
    for (auto seed : cfg.seeds) {
      block.runs.push_back(cfg.algorithm == Algorithm::balanced_kmeans
                               ? run_kmeans(cfg, data, gamma, seed)
                               : run_mincut(cfg, data, *affinity, gamma, seed));
    }
    block.aggregate = aggregate_runs(block.runs);
    report.blocks.push_back(std::move(block));
  }
  return report;
}

Selection select_best(const RunReport& report, SelectionCriterion criterion) {
  if (!report.has_labels) {
    throw std::invalid_argument("gamma selection needs ground-truth labels");
  }
  if (report.blocks.empty()) throw std::invalid_argument("report has no gamma blocks");
  Selection sel{criterion, report.blocks.front().gamma, 0};
  auto score = [&](const GammaBlock& b) {
    return criterion == SelectionCriterion::acc ? *b.aggregate.acc_mean : *b.aggregate.nmi_mean;
  };
  for (std::size_t i = 1; i < report.blocks.size(); ++i) {
    if (score(report.blocks[i]) > score(report.blocks[sel.best_index])) {
      sel.best_index = i;
      sel.best_gamma = report.blocks[i].gamma;
    }
  }
  return sel;
}

RunReport grid_search(const ExperimentConfig& cfg) {
  return grid_search(cfg, load_dataset(cfg.dataset));
}

RunReport grid_search(const ExperimentConfig& cfg, const LabeledData& data) {
  if (!data.labels) throw std::invalid_argument("grid search needs ground-truth labels");
  auto grid_cfg = cfg;
  grid_cfg.grid = true;
  auto report = run_experiment(grid_cfg, data);
  report.selection = select_best(report, cfg.select);
  return report;
}

std::string report_to_json(const RunReport& report, bool include_wall_time) {
  const bool mincut = report.config.algorithm == Algorithm::balanced_mincut;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_to_json(report.config);
  j["samples"] = report.samples;
  j["features"] = report.features;
  j["has_labels"] = report.has_labels;

  json blocks = json::array();
  for (const auto& b : report.blocks) {
    json runs = json::array();
    for (const auto& r : b.runs) {
      json trace = json::array();
      for (const auto& t : r.trace) {
        json row;
        row["iteration"] = t.iteration;
        row[mincut ? "within" : "fit"] = t.primary;
        row["penalty"] = t.penalty;
        row["total"] = t.total;
        if (t.shifted) row["shifted"] = *t.shifted;
        trace.push_back(std::move(row));
      }
      json run;
      run["seed"] = r.seed;
      run["gamma"] = r.gamma;
      run["iterations"] = r.iterations;
      run["converged"] = r.converged;
      run["metrics"] = {{"acc", optional_number(r.metrics.acc)},
                        {"nmi", optional_number(r.metrics.nmi)},
                        {"cluster_sizes", r.metrics.cluster_sizes.counts},
                        {"penalty_value", r.metrics.penalty_value},
                        {"size_stddev", r.metrics.size_stddev},
                        {"is_perfectly_balanced", r.metrics.is_perfectly_balanced}};
      run["trace"] = std::move(trace);
      if (include_wall_time) run["wall_ms"] = r.wall_ms;
      run["warnings"] = r.warnings;
      runs.push_back(std::move(run));
    }
    const auto& a = b.aggregate;
    json block;
    block["gamma"] = b.gamma;
    block["aggregate"] = {{"acc_mean", optional_number(a.acc_mean)},
                          {"acc_std", optional_number(a.acc_std)},
                          {"nmi_mean", optional_number(a.nmi_mean)},
                          {"nmi_std", optional_number(a.nmi_std)},
                          {"size_stddev_mean", a.size_stddev_mean},
                          {"penalty_mean", a.penalty_mean}};
    block["runs"] = std::move(runs);
    blocks.push_back(std::move(block));
  }
  j["results"] = std::move(blocks);

  if (report.selection) {
    j["selection"] = {{"criterion", to_string(report.selection->criterion)},
                      {"best_gamma", report.selection->best_gamma},
                      {"best_index", report.selection->best_index}};
    json sweep = json::array();
    for (const auto& b : report.blocks) {
      sweep.push_back({{"gamma", b.gamma},
                       {"acc_mean", optional_number(b.aggregate.acc_mean)},
                       {"acc_std", optional_number(b.aggregate.acc_std)},
                       {"nmi_mean", optional_number(b.aggregate.nmi_mean)},
                       {"nmi_std", optional_number(b.aggregate.nmi_std)}});
    }
    j["sweep"] = std::move(sweep);
  }
  return j.dump(2) + "\n";
}

RunReport report_from_json(std::string_view text) {
  const auto j = json::parse(text);
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw std::invalid_argument("unsupported report schema_version");
  }
  RunReport report;
  report.config = config_from_json(j.at("config"));
  const bool mincut = report.config.algorithm == Algorithm::balanced_mincut;
  report.samples = j.at("samples").get<Index>();
  report.features = j.at("features").get<Index>();
  report.has_labels = j.at("has_labels").get<bool>();
  for (const auto& jb : j.at("results")) {
    GammaBlock b;
    b.gamma = jb.at("gamma").get<double>();
    const auto& ja = jb.at("aggregate");
    b.aggregate.acc_mean = read_optional(ja.at("acc_mean"));
    b.aggregate.acc_std = read_optional(ja.at("acc_std"));
    b.aggregate.nmi_mean = read_optional(ja.at("nmi_mean"));
    b.aggregate.nmi_std = read_optional(ja.at("nmi_std"));
    b.aggregate.size_stddev_mean = ja.at("size_stddev_mean").get<double>();
    b.aggregate.penalty_mean = ja.at("penalty_mean").get<double>();
    for (const auto& jr : jb.at("runs")) {
      SeedRun r;
      r.seed = jr.at("seed").get<std::uint64_t>();
      r.gamma = jr.at("gamma").get<double>();
      r.iterations = jr.at("iterations").get<int>();
      r.converged = jr.at("converged").get<bool>();
      const auto& jm = jr.at("metrics");
      r.metrics.acc = read_optional(jm.at("acc"));
      r.metrics.nmi = read_optional(jm.at("nmi"));
      r.metrics.cluster_sizes.counts = jm.at("cluster_sizes").get<std::vector<std::int64_t>>();
      r.metrics.penalty_value = jm.at("penalty_value").get<double>();
      r.metrics.size_stddev = jm.at("size_stddev").get<double>();
      r.metrics.is_perfectly_balanced = jm.at("is_perfectly_balanced").get<bool>();
      for (const auto& jt : jr.at("trace")) {
        TraceRow t;
        t.iteration = jt.at("iteration").get<int>();
        t.primary = jt.at(mincut ? "within" : "fit").get<double>();
        t.penalty = jt.at("penalty").get<double>();
        t.total = jt.at("total").get<double>();
        if (jt.contains("shifted")) t.shifted = jt.at("shifted").get<double>();
        r.trace.push_back(t);
      }
      if (jr.contains("wall_ms")) r.wall_ms = jr.at("wall_ms").get<double>();
      r.warnings = jr.at("warnings").get<std::vector<std::string>>();
      b.runs.push_back(std::move(r));
    }
    report.blocks.push_back(std::move(b));
  }
  if (j.contains("selection")) {
    const auto& js = j.at("selection");
    report.selection = Selection{criterion_from_string(js.at("criterion").get<std::string>()),
                                 js.at("best_gamma").get<double>(),
                                 js.at("best_index").get<std::size_t>()};
  }
  return report;
}

std::string report_to_csv(const RunReport& report) {
  std::string out = "seed,gamma,acc,nmi,penalty,iterations,wall_ms\n";
  for (const auto& b : report.blocks) {
    for (const auto& r : b.runs) {
      out += std::to_string(r.seed) + "," + number(r.gamma) + "," +
             (r.metrics.acc ? number(*r.metrics.acc) : "") + "," +
             (r.metrics.nmi ? number(*r.metrics.nmi) : "") + "," + number(r.metrics.penalty_value) +
             "," + std::to_string(r.iterations) + "," + number(r.wall_ms) + "\n";
    }
  }
  return out;
}

std::string sweep_to_csv(const RunReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? number(*v) : std::string(); };
  std::string out = "gamma,acc_mean,acc_std,nmi_mean,nmi_std,size_stddev_mean\n";
  for (const auto& b : report.blocks) {
    const auto& a = b.aggregate;
    out += number(b.gamma) + "," + opt(a.acc_mean) + "," + opt(a.acc_std) + "," +
           opt(a.nmi_mean) + "," + opt(a.nmi_std) + "," + number(a.size_stddev_mean) + "\n";
  }
  return out;
}

void emit_report(const RunReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << (format == ReportFormat::json ? report_to_json(report) : report_to_csv(report));
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

const char* to_string(Algorithm a) {
  return a == Algorithm::balanced_kmeans ? "balanced_kmeans" : "balanced_mincut";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "balanced_kmeans" || name == "kmeans") return Algorithm::balanced_kmeans;
  if (name == "balanced_mincut" || name == "mincut") return Algorithm::balanced_mincut;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

const char* to_string(SelectionCriterion c) { return c == SelectionCriterion::acc ? "acc" : "nmi"; }

SelectionCriterion criterion_from_string(std::string_view name) {
  if (name == "acc") return SelectionCriterion::acc;
  if (name == "nmi") return SelectionCriterion::nmi;
  throw std::invalid_argument("unknown selection criterion '" + std::string(name) + "'");
}

ReportFormat format_from_string(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

}  // namespace balclust
