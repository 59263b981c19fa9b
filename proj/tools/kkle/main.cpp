#ifdef KKLE_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <exception>
#include <iostream>

#include "commands.hpp"
#include "kkle/error.hpp"

namespace {

using namespace kkle::cli;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitNumericalFailure = 2;

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& f) {
  cmd->add_option("--mode", f.mode, "dual (Gram matrix) or primal (random features)")
      ->check(CLI::IsMember({"dual", "primal"}))
      ->capture_default_str();
  cmd->add_option("--features", f.features, "random feature dimension d (primal)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--bandwidth", f.bandwidth, "RBF bandwidth, or 'median' for the median heuristic")
      ->capture_default_str();
  cmd->add_option("--budget", f.budget, "RKHS norm budget M")->check(CLI::PositiveNumber);
  cmd->add_option("--step", f.step, "SGD step size")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", f.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", f.gamma, "convergence tolerance on the smoothed estimate")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--batch", f.batch, "minibatch size per sample set")->check(CLI::PositiveNumber);
  cmd->add_option("--penalty", f.penalty, "RKHS norm penalty weight")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "seed for every random stream")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputOptions& o, std::vector<std::string> formats) {
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
  cmd->add_flag("--bits", o.bits, "report information in bits instead of nats");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kkle: kernel KL divergence and mutual information estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kkle 0.1.0");

  KlArgs kl;
  auto* kl_cmd = app.add_subcommand("estimate-kl", "estimate KL(P || Q) from two sample files");
  kl_cmd->add_option("--p", kl.p_path, "CSV of samples from P")->required();
  kl_cmd->add_option("--q", kl.q_path, "CSV of samples from Q")->required();
  add_estimator_flags(kl_cmd, kl.est);
  add_output_flags(kl_cmd, kl.output, {"json", "text"});

  MiArgs mi;
  auto* mi_cmd = app.add_subcommand("estimate-mi", "estimate I(X; Y) between two column groups");
  mi_cmd->add_option("--data", mi.data_path, "CSV with one joint sample per row")->required();
  mi_cmd->add_option("--x-cols", mi.x_cols, "comma-separated X column names or 1-based numbers")->required();
  mi_cmd->add_option("--y-cols", mi.y_cols, "comma-separated Y column names or 1-based numbers")->required();
  mi_cmd->add_option("--estimator", mi.estimator, "kkle or mine")
      ->check(CLI::IsMember({"kkle", "mine"}))
      ->capture_default_str();
  mi_cmd->add_option("--hidden", mi.hidden, "MINE hidden width")->check(CLI::PositiveNumber)->capture_default_str();
  add_estimator_flags(mi_cmd, mi.est);
  add_output_flags(mi_cmd, mi.output, {"json", "text"});

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "bias / RMSE / variance of MI estimators on Gaussian pairs");
  bench_cmd->add_option("--protocol", bench.protocol, "small (N=100, full batch, 100 iterations) or large (N=1e5)")
      ->check(CLI::IsMember({"small", "large"}))
      ->capture_default_str();
  bench_cmd->add_option("--estimators", bench.estimators, "comma-separated subset of kkle,mine")
      ->capture_default_str();
  bench_cmd->add_option("--dims", bench.dims, "comma-separated dimensions D");
  bench_cmd->add_option("--rhos", bench.rhos, "comma-separated correlations");
  bench_cmd->add_option("--n", bench.n, "samples per trial")->check(CLI::Range(4, 1 << 30));
  bench_cmd->add_option("--trials", bench.trials, "trials per cell")->check(CLI::Range(2, 1 << 20));
  bench_cmd->add_option("--seed", bench.seed, "benchmark seed")->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "worker threads (0: logical processors)")->capture_default_str();
  bench_cmd->add_option("--kkle-step", bench.kkle_step, "KKLE step size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--mine-step", bench.mine_step, "MINE step size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.output.out, "output file (default: stdout)");
  bench_cmd->add_option("--format", bench.output.format, "csv, json or table")->capture_default_str();

  FairnessArgs fair;
  auto* fair_cmd = app.add_subcommand("fairness", "MI-based fairness metrics from a prediction log");
  fair_cmd->add_option("--data", fair.data_path, "CSV prediction log")->required();
  fair_cmd->add_option("--pred-col", fair.pred_col, "prediction column")->required();
  fair_cmd->add_option("--attr-col", fair.attr_col, "protected attribute column")->required();
  fair_cmd->add_option("--label-col", fair.label_col, "ground-truth class column");
  fair_cmd->add_option("--positive-class", fair.positive_class, "class for equality of opportunity (default 1)");
  fair_cmd->add_option("--metrics", fair.metrics,
                       "comma-separated: demographic_parity, equality_of_odds, equality_of_opportunity, all");
  fair_cmd->add_option("--jitter", fair.jitter, "noise half-width added to discrete columns")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_estimator_flags(fair_cmd, fair.est);
  add_output_flags(fair_cmd, fair.output, {"json", "text"});

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "write correlated Gaussian pairs as CSV");
  gen_cmd->add_option("--dim", gen.dim, "number of component pairs D")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--rho", gen.rho, "per-component correlation")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "number of rows")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (kl_cmd->parsed()) return run_estimate_kl(kl);
    if (mi_cmd->parsed()) return run_estimate_mi(mi);
    if (bench_cmd->parsed()) return run_benchmark_cmd(bench);
    if (fair_cmd->parsed()) return run_fairness(fair);
    if (gen_cmd->parsed()) return run_generate(gen);
  } catch (const kkle::NumericalFailure& e) {
    std::cerr << "kkle: numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const kkle::InvalidInput& e) {
    std::cerr << "kkle: error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "kkle: failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
  return kExitInvalidInput;
}
