#include "kkle/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "kkle/csv.hpp"
#include "kkle/error.hpp"
#include "kkle/synthetic.hpp"

namespace kkle {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string cell_tag(std::string_view prefix, Index dimension, double rho) {
  return std::string(prefix) + "/D=" + std::to_string(dimension) + "/rho=" + format_double(rho);
}

struct TrialOutcome {
  double estimate = 0.0;
  double seconds = 0.0;
  bool failed = false;
};

struct Cell {
  EstimatorKind kind;
  Index dimension;
  double rho;
};

TrialOutcome run_trial(const BenchmarkConfig& cfg, const Cell& cell, Index trial) {
  GaussianPairSpec spec;
  spec.dimension = cell.dimension;
  spec.rho = cell.rho;
  spec.sample_count = cfg.sample_count;
  spec.seed = benchmark_data_seed(cfg.seed, cell.dimension, cell.rho, trial);
  const SampleSet pairs = sample_gaussian_pairs(spec);

  ColumnSplit split;
  for (Index k = 0; k < cell.dimension; ++k) {
    split.x_cols.push_back(k);
    split.y_cols.push_back(cell.dimension + k);
  }
  const Seed est_seed = benchmark_estimator_seed(cfg.seed, cell.kind, cell.dimension, cell.rho, trial);

  TrialOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (cell.kind == EstimatorKind::kkle) {
      EstimatorConfig c = cfg.kkle;
      c.optimizer.seed = est_seed;
      out.estimate = estimate_mi(pairs, split, c).kl_estimate;
    } else {
      MineConfig c = cfg.mine;
      c.optimizer.seed = est_seed;
      out.estimate = mine_estimate_mi(pairs, split, c).kl_estimate;
    }
  } catch (const NumericalFailure&) {
    out.failed = true;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& cell, std::size_t line) {
  double v = 0.0;
  std::string_view s(cell);
  if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("benchmark report: line " + std::to_string(line) + ": bad number '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) { return kind == EstimatorKind::kkle ? "kkle" : "mine"; }

EstimatorKind parse_estimator_kind(std::string_view name) {
  const auto n = lower(name);
  if (n == "kkle") return EstimatorKind::kkle;
  if (n == "mine") return EstimatorKind::mine;
  throw InvalidInput("unknown estimator '" + std::string(name) + "' (expected kkle or mine)");
}

void BenchmarkConfig::validate() const {
  if (estimators.empty()) throw InvalidInput("benchmark: no estimators selected");
  if (dims.empty()) throw InvalidInput("benchmark: no dimensions given");
  if (rhos.empty()) throw InvalidInput("benchmark: no correlations given");
  if (trials < 2) throw InvalidInput("benchmark: trials must be at least 2");
  if (sample_count < 4) throw InvalidInput("benchmark: sample count must be at least 4");
  for (const Index d : dims) {
    if (d < 1) throw InvalidInput("benchmark: dimensions must be positive");
  }
  for (const double r : rhos) {
    if (!(r > -1.0 && r < 1.0)) throw InvalidInput("benchmark: rho must lie in (-1, 1)");
  }
  for (const auto k : estimators) {
    if (k == EstimatorKind::kkle) kkle.validate();
    if (k == EstimatorKind::mine) mine.validate();
  }
}

BenchmarkConfig BenchmarkConfig::small_data() {
  BenchmarkConfig c;
  c.dims = {1};
  c.sample_count = 100;
  for (auto* opt : {&c.kkle.optimizer, &c.mine.optimizer}) {
    opt->batch_size = c.sample_count;
    opt->max_iter = 100;
    opt->gamma = 0.0;
  }
  return c;
}

BenchmarkConfig BenchmarkConfig::large_data() { return BenchmarkConfig{}; }

Seed benchmark_data_seed(Seed seed, Index dimension, double rho, Index trial) {
  return derive_seed(derive_seed(seed, cell_tag("data", dimension, rho)), static_cast<std::uint64_t>(trial));
}

Seed benchmark_estimator_seed(Seed seed, EstimatorKind kind, Index dimension, double rho, Index trial) {
  return derive_seed(derive_seed(seed, cell_tag(to_string(kind), dimension, rho)),
                     static_cast<std::uint64_t>(trial));
}

CellStatistics cell_statistics(std::span<const double> estimates, double truth) {
  CellStatistics s;
  if (estimates.empty()) {
    s.bias = s.rmse = s.variance = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  const double n = static_cast<double>(estimates.size());
  const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / n;
  double sq_err = 0.0;
  double sq_dev = 0.0;
  for (const double e : estimates) {
    sq_err += (e - truth) * (e - truth);
    sq_dev += (e - mean) * (e - mean);
  }
  s.bias = mean - truth;
  s.rmse = std::sqrt(sq_err / n);
  s.variance = sq_dev / n;
  return s;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  cfg.validate();
  std::vector<Cell> cells;
  for (const auto kind : cfg.estimators) {
    for (const Index d : cfg.dims) {
      for (const double r : cfg.rhos) cells.push_back({kind, d, r});
    }
  }
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t total = cells.size() * trials;
  std::vector<TrialOutcome> outcomes(total);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!abort) {
      const std::size_t task = next++;
      if (task >= total) return;
      try {
        outcomes[task] = run_trial(cfg, cells[task / trials], static_cast<Index>(task % trials));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        abort = true;
      }
    }
  };
  unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  BenchmarkReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    BenchmarkRow row;
    row.estimator = cells[c].kind;
    row.dimension = cells[c].dimension;
    row.rho = cells[c].rho;
    row.true_mi = analytic_mi(row.dimension, row.rho);
    row.trials = cfg.trials;
    double seconds = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& o = outcomes[c * trials + t];
      if (o.failed) {
        ++row.failed_trials;
      } else {
        row.estimates.push_back(o.estimate);
        seconds += o.seconds;
      }
    }
    row.failed = 10 * row.failed_trials > row.trials;
    const auto stats = cell_statistics(row.estimates, row.true_mi);
    row.bias = stats.bias;
    row.rmse = stats.rmse;
    row.variance = stats.variance;
    row.mean_runtime_seconds = row.estimates.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                     : seconds / static_cast<double>(row.estimates.size());
    report.rows.push_back(std::move(row));
  }
  return report;
}

ReportFormat parse_report_format(std::string_view name) {
  const auto n = lower(name);
  if (n == "csv") return ReportFormat::csv;
  if (n == "json") return ReportFormat::json;
  if (n == "table") return ReportFormat::table;
  throw InvalidInput("unsupported report format '" + std::string(name) + "' (expected csv, json or table)");
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"estimator", "D",    "rho",
                                             "true_mi",   "bias", "rmse",
                                             "variance",  "mean_runtime_seconds", "trials",
                                             "failed_trials", "failed"};
  return cols;
}

void emit_report(const BenchmarkReport& report, ReportFormat format, std::ostream& out) {
  const auto& cols = report_columns();
  switch (format) {
    case ReportFormat::csv: {
      for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
      out << '\n';
      for (const auto& r : report.rows) {
        out << to_string(r.estimator) << ',' << r.dimension << ',' << csv_number(r.rho) << ','
            << csv_number(r.true_mi) << ',' << csv_number(r.bias) << ',' << csv_number(r.rmse) << ','
            << csv_number(r.variance) << ',' << csv_number(r.mean_runtime_seconds) << ',' << r.trials << ','
            << r.failed_trials << ',' << (r.failed ? 1 : 0) << '\n';
      }
      return;
    }
    case ReportFormat::json: {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : report.rows) {
        rows.push_back({{"estimator", to_string(r.estimator)},
                        {"D", r.dimension},
                        {"rho", r.rho},
                        {"true_mi", r.true_mi},
                        {"bias", number_or_null(r.bias)},
                        {"rmse", number_or_null(r.rmse)},
                        {"variance", number_or_null(r.variance)},
                        {"mean_runtime_seconds", number_or_null(r.mean_runtime_seconds)},
                        {"trials", r.trials},
                        {"failed_trials", r.failed_trials},
                        {"failed", r.failed},
                        {"estimates", r.estimates}});
      }
      const nlohmann::json doc{{"schema_version", 1}, {"kind", "benchmark_report"}, {"rows", rows}};
      out << doc.dump(2) << '\n';
      return;
    }
    case ReportFormat::table: {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-9s %3s %6s %10s %10s %10s %10s %10s %7s %6s\n", "estimator", "D", "rho",
                    "true_mi", "bias", "rmse", "variance", "runtime_s", "trials", "failed");
      out << buf;
      for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%-9s %3ld %6.3f %10.6f %10.6f %10.6f %10.6f %10.3f %7ld %6ld%s\n",
                      std::string(to_string(r.estimator)).c_str(), static_cast<long>(r.dimension), r.rho,
                      r.true_mi, r.bias, r.rmse, r.variance, r.mean_runtime_seconds,
                      static_cast<long>(r.trials), static_cast<long>(r.failed_trials), r.failed ? " *" : "");
        out << buf;
      }
      return;
    }
  }
}

std::string emit_report(const BenchmarkReport& report, std::string_view format) {
  std::ostringstream out;
  emit_report(report, parse_report_format(format), out);
  return out.str();
}

BenchmarkReport parse_report_csv(std::istream& in) {
  BenchmarkReport report;
  std::string line;
  std::size_t line_no = 0;
  const auto& cols = report_columns();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line_no == 1) {
      if (cells != cols) throw InvalidInput("benchmark report: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    if (cells.size() != cols.size()) {
      throw InvalidInput("benchmark report: line " + std::to_string(line_no) + " has wrong number of fields");
    }
    BenchmarkRow r;
    r.estimator = parse_estimator_kind(cells[0]);
    r.dimension = static_cast<Index>(parse_field(cells[1], line_no));
    r.rho = parse_field(cells[2], line_no);
    r.true_mi = parse_field(cells[3], line_no);
    r.bias = parse_field(cells[4], line_no);
    r.rmse = parse_field(cells[5], line_no);
    r.variance = parse_field(cells[6], line_no);
    r.mean_runtime_seconds = parse_field(cells[7], line_no);
    r.trials = static_cast<Index>(parse_field(cells[8], line_no));
    r.failed_trials = static_cast<Index>(parse_field(cells[9], line_no));
    r.failed = parse_field(cells[10], line_no) != 0.0;
    report.rows.push_back(std::move(r));
  }
  if (line_no == 0) throw InvalidInput("benchmark report: empty input");
  return report;
}

}  // namespace kkle
