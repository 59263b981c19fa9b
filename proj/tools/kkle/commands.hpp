#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kkle/benchmark.hpp"
#include "kkle/estimator.hpp"
#include "kkle/mine.hpp"

namespace kkle::cli {

struct OutputOptions {
  std::string out;  // empty: stdout
  std::string format = "json";
  bool bits = false;
};

/// Estimator flags shared by every estimating command, as typed.
struct EstimatorFlags {
  std::string mode = "primal";
  Index features = 1024;
  std::string bandwidth = "median";
  std::optional<double> budget;
  std::optional<double> step;
  std::optional<std::size_t> max_iter;
  std::optional<double> gamma;
  std::optional<Index> batch;
  std::optional<double> penalty;
  std::uint64_t seed = 0;

  EstimatorConfig kkle_config() const;
  /// Applies the optimiser flags that MINE shares with KKLE.
  MineConfig mine_config(Index hidden) const;
};

struct KlArgs {
  std::string p_path;
  std::string q_path;
  EstimatorFlags est;
  OutputOptions output;
};

struct MiArgs {
  std::string data_path;
  std::string x_cols;
  std::string y_cols;
  std::string estimator = "kkle";
  Index hidden = 64;
  EstimatorFlags est;
  OutputOptions output;
};

struct BenchmarkArgs {
  std::string protocol = "large";
  std::string estimators = "kkle,mine";
  std::string dims;
  std::string rhos;
  std::optional<Index> n;
  std::optional<Index> trials;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::optional<double> kkle_step;
  std::optional<double> mine_step;
  OutputOptions output{"", "table", false};
};

struct FairnessArgs {
  std::string data_path;
  std::string pred_col;
  std::string attr_col;
  std::string label_col;
  std::optional<double> positive_class;
  std::string metrics;
  double jitter = 1e-3;
  EstimatorFlags est;
  OutputOptions output;
};

struct GenerateArgs {
  Index dim = 1;
  double rho = 0.0;
  Index n = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_estimate_kl(const KlArgs& args);
int run_estimate_mi(const MiArgs& args);
int run_benchmark_cmd(const BenchmarkArgs& args);
int run_fairness(const FairnessArgs& args);
int run_generate(const GenerateArgs& args);

/// Splits a comma-separated list, dropping surrounding blanks.
std::vector<std::string> split_list(const std::string& text);

}  // namespace kkle::cli
