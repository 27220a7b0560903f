#include "balclust/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace balclust {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::optional<double> parse_real(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Integer-valued labels compare by value ("02" == "2"); anything else by text.
std::string label_key(std::string_view cell) {
  long long v = 0;
  auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec == std::errc() && end == cell.data() + cell.size()) return "i:" + std::to_string(v);
  return "s:" + std::string(cell);
}

}  // namespace

LabeledData parse_csv(std::string_view text, const CsvOptions& options) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  const std::size_t first = options.has_header ? 1 : 0;
  if (lines.size() <= first) throw CsvError("empty CSV: no data rows");

  const std::size_t width = split_cells(lines[first]).size();
  if (options.label_column && (*options.label_column < 0 ||
                               static_cast<std::size_t>(*options.label_column) >= width)) {
    throw CsvError("label column " + std::to_string(*options.label_column) +
                   " is outside the " + std::to_string(width) + " columns");
  }
  const std::size_t features = options.label_column ? width - 1 : width;
  if (features == 0) throw CsvError("CSV has no feature columns");

  const std::size_t rows = lines.size() - first;
  Eigen::MatrixXd values(static_cast<Index>(features), static_cast<Index>(rows));
  std::vector<Label> labels;
  std::unordered_map<std::string, Label> dense;

  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t line_no = first + r + 1;
    auto cells = split_cells(lines[first + r]);
    if (cells.size() != width) {
      throw CsvError("ragged row at line " + std::to_string(line_no) + ": expected " +
                     std::to_string(width) + " cells, found " + std::to_string(cells.size()));
    }
    Index f = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (options.label_column && static_cast<int>(c) == *options.label_column) {
        if (cells[c].empty()) {
          throw CsvError("empty label at line " + std::to_string(line_no) + ", column " +
                         std::to_string(c));
        }
        auto [it, inserted] =
            dense.try_emplace(label_key(cells[c]), static_cast<Label>(dense.size()));
        labels.push_back(it->second);
        continue;
      }
      auto v = parse_real(cells[c]);
      if (!v) {
        throw CsvError("cannot parse '" + std::string(cells[c]) + "' as a finite number at line " +
                       std::to_string(line_no) + ", column " + std::to_string(c));
      }
      values(f++, static_cast<Index>(r)) = *v;
    }
  }

  LabeledData out{DataMatrix(std::move(values)), std::nullopt};
  if (options.label_column) {
    out.labels.emplace(std::move(labels), static_cast<int>(dense.size()));
  }
  return out;
}

LabeledData load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failure on '" + path.string() + "'");
  return parse_csv(buf.str(), options);
}

std::string to_csv(const Eigen::MatrixXd& samples_by_column) {
  std::string out;
  char buf[64];
  for (Index j = 0; j < samples_by_column.cols(); ++j) {
    for (Index f = 0; f < samples_by_column.rows(); ++f) {
      if (f > 0) out.push_back(',');
      auto res = std::to_chars(buf, buf + sizeof(buf), samples_by_column(f, j));
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void save_csv(const DataMatrix& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_csv(data.values());
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

LabeledData generate_blobs(const BlobSpec& spec, RngSeed seed) {
  if (spec.clusters < 1 || spec.per_cluster < 1 || spec.dim < 1 || !(spec.spread > 0.0) ||
      !(spec.separation > 0.0)) {
    throw std::invalid_argument("blob spec needs clusters, per_cluster, dim >= 1 and "
                                "spread, separation > 0");
  }
  std::mt19937_64 rng(seed.value);
  const Index d = spec.dim;
  const int k = spec.clusters;

  // Rejection sampling in a cube that grows slowly if placement keeps failing.
  double side = spec.separation * std::max(1.0, std::pow(static_cast<double>(k), 1.0 / d));
  Eigen::MatrixXd centers(d, k);
  int placed = 0;
  int failures = 0;
  while (placed < k) {
    std::uniform_real_distribution<double> coord(0.0, side);
    Eigen::VectorXd c(d);
    for (Index f = 0; f < d; ++f) c(f) = coord(rng);
    bool ok = true;
    for (int p = 0; p < placed && ok; ++p) {
      ok = (centers.col(p) - c).norm() >= spec.separation;
    }
    if (ok) {
      centers.col(placed++) = c;
      failures = 0;
    } else if (++failures == 1000) {
      side *= 1.1;
      failures = 0;
    }
  }

  const Index n = static_cast<Index>(k) * spec.per_cluster;
  Eigen::MatrixXd values(d, n);
  std::vector<Label> truth(static_cast<std::size_t>(n));
  std::normal_distribution<double> noise(0.0, spec.spread);
  Index j = 0;
  for (int c = 0; c < k; ++c) {
    for (int s = 0; s < spec.per_cluster; ++s, ++j) {
      for (Index f = 0; f < d; ++f) values(f, j) = centers(f, c) + noise(rng);
      truth[static_cast<std::size_t>(j)] = c;
    }
  }
  return {DataMatrix(std::move(values)), Assignment(std::move(truth), k)};
}

Assignment init_assignment(Index n, int k, InitMode mode, RngSeed seed) {
  if (k < 1 || n < k) {
    throw std::invalid_argument("init_assignment needs n >= k >= 1 (n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ")");
  }
  std::mt19937_64 rng(seed.value);
  std::vector<Label> labels(static_cast<std::size_t>(n));

  if (mode == InitMode::balanced_random) {
    for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<Label>(i % k);
    std::shuffle(labels.begin(), labels.end(), rng);
    return Assignment(std::move(labels), k);
  }

  std::uniform_int_distribution<Label> pick(0, k - 1);
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (auto& l : labels) {
    l = pick(rng);
    ++sizes[static_cast<std::size_t>(l)];
  }
  // Each empty cluster takes one random point from a cluster that can spare it.
  for (Label empty = 0; empty < k; ++empty) {
    if (sizes[static_cast<std::size_t>(empty)] > 0) continue;
    std::vector<Index> donors;
    for (Index i = 0; i < n; ++i) {
      if (sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] >= 2) {
        donors.push_back(i);
      }
    }
    std::uniform_int_distribution<std::size_t> which(0, donors.size() - 1);
    const auto i = static_cast<std::size_t>(donors[which(rng)]);
    --sizes[static_cast<std::size_t>(labels[i])];
    labels[i] = empty;
    ++sizes[static_cast<std::size_t>(empty)];
  }
  return Assignment(std::move(labels), k);
}

const char* to_string(InitMode mode) {
  return mode == InitMode::uniform_random ? "uniform" : "balanced";
}

InitMode init_mode_from_string(std::string_view name) {
  if (name == "uniform" || name == "uniform_random") return InitMode::uniform_random;
  if (name == "balanced" || name == "balanced_random") return InitMode::balanced_random;
  throw std::invalid_argument("unknown init mode '" + std::string(name) + "'");
}

}  // namespace balclust
