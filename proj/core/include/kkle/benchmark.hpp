#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kkle/estimator.hpp"
#include "kkle/mine.hpp"
#include "kkle/rng.hpp"

namespace kkle {

enum class EstimatorKind { kkle, mine };

std::string_view to_string(EstimatorKind kind);
/// Accepts "kkle" or "mine" (case-insensitive).
EstimatorKind parse_estimator_kind(std::string_view name);

/// Grid of MI estimation cells on Gaussian pairs: every estimator x D x rho,
/// each repeated `trials` times on freshly sampled data.
struct BenchmarkConfig {
  std::vector<EstimatorKind> estimators{EstimatorKind::kkle, EstimatorKind::mine};
  std::vector<Index> dims{1, 5};
  std::vector<double> rhos{0.2, 0.5, 0.9};
  Index sample_count = 100000;
  Index trials = 20;
  EstimatorConfig kkle;
  MineConfig mine;
  Seed seed = 0;
  /// Worker threads; 0 uses the number of logical processors.
  unsigned jobs = 0;

  void validate() const;

  /// N = 100, D = 1, whole data every step, exactly 100 iterations.
  static BenchmarkConfig small_data();
  /// N = 1e5, minibatch SGD with the estimator defaults.
  static BenchmarkConfig large_data();
};

struct CellStatistics {
  double bias = 0.0;
  double rmse = 0.0;
  /// Population variance (divides by the trial count).
  double variance = 0.0;
};

/// Statistics of `estimates` against `truth`. Empty input gives NaN fields.
CellStatistics cell_statistics(std::span<const double> estimates, double truth);

struct BenchmarkRow {
  EstimatorKind estimator = EstimatorKind::kkle;
  Index dimension = 1;
  double rho = 0.0;
  double true_mi = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  double variance = 0.0;
  double mean_runtime_seconds = 0.0;
  Index trials = 0;
  /// Trials that raised a numerical failure; statistics cover the rest.
  Index failed_trials = 0;
  /// More than 10% of the trials failed.
  bool failed = false;
  /// Per-trial reported estimates of the successful trials, in trial order.
  std::vector<double> estimates;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
};

/// Rows are ordered estimator, then D, then rho, as listed in the config,
/// whatever the number of workers.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

/// Seeds for one trial. Data depends only on (D, rho, trial) so estimators
/// are compared on the same samples.
Seed benchmark_data_seed(Seed seed, Index dimension, double rho, Index trial);
Seed benchmark_estimator_seed(Seed seed, EstimatorKind kind, Index dimension, double rho, Index trial);

enum class ReportFormat { csv, json, table };

/// Throws InvalidInput for anything but csv, json or table.
ReportFormat parse_report_format(std::string_view name);

/// Column order: estimator, D, rho, true_mi, bias, rmse, variance,
/// mean_runtime_seconds, trials, failed_trials, failed.
const std::vector<std::string>& report_columns();

void emit_report(const BenchmarkReport& report, ReportFormat format, std::ostream& out);
std::string emit_report(const BenchmarkReport& report, std::string_view format);

/// Reads back the csv format (estimates are not part of it).
BenchmarkReport parse_report_csv(std::istream& in);

}  // namespace kkle
