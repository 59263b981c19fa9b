#include "commands.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "kkle/csv.hpp"
#include "kkle/error.hpp"
#include "kkle/fairness.hpp"
#include "kkle/synthetic.hpp"
#include "output.hpp"

namespace kkle::cli {
namespace {

double parse_real(const std::string& flag, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidInput(flag + ": not a number: '" + text + "'");
  }
  return v;
}

std::string render(const nlohmann::json& doc, const OutputOptions& o) {
  if (o.format == "json") return doc.dump(2) + "\n";
  if (o.format == "text") return text_lines(doc);
  throw InvalidInput("--format: unsupported value '" + o.format + "' (expected json or text)");
}

void apply_optimizer_flags(const EstimatorFlags& f, OptimizerConfig& c) {
  if (f.step) c.step_size = *f.step;
  if (f.max_iter) c.max_iter = *f.max_iter;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.batch) c.batch_size = *f.batch;
  c.seed = f.seed;
}

std::vector<Index> resolve_columns(const CsvDataset& ds, const std::string& flag, const std::string& list) {
  std::vector<Index> cols;
  for (const auto& name : split_list(list)) {
    try {
      cols.push_back(ds.column_index(name));
    } catch (const InvalidInput& e) {
      throw InvalidInput(flag + ": " + e.what());
    }
  }
  if (cols.empty()) throw InvalidInput(flag + ": no columns given");
  return cols;
}

Index resolve_column(const CsvDataset& ds, const std::string& flag, const std::string& name) {
  try {
    return ds.column_index(name);
  } catch (const InvalidInput& e) {
    throw InvalidInput(flag + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

EstimatorConfig EstimatorFlags::kkle_config() const {
  EstimatorConfig c;
  if (mode == "dual") {
    c.mode = Mode::dual;
  } else if (mode != "primal") {
    throw InvalidInput("--mode: expected dual or primal, got '" + mode + "'");
  }
  c.feature_dim = features;
  if (bandwidth != "median") {
    const double bw = parse_real("--bandwidth", bandwidth);
    if (!(bw > 0.0)) throw InvalidInput("--bandwidth: must be positive or 'median'");
    c.bandwidth = bw;
  }
  apply_optimizer_flags(*this, c.optimizer);
  if (budget) c.optimizer.norm_budget = *budget;
  if (penalty) c.optimizer.penalty_weight = *penalty;
  c.validate();
  return c;
}

MineConfig EstimatorFlags::mine_config(Index hidden) const {
  MineConfig c;
  c.hidden_width = hidden;
  apply_optimizer_flags(*this, c.optimizer);
  c.validate();
  return c;
}

int run_estimate_kl(const KlArgs& a) {
  const EstimatorConfig cfg = a.est.kkle_config();
  const CsvDataset p = read_csv(a.p_path);
  const CsvDataset q = read_csv(a.q_path);
  if (p.data.cols() != q.data.cols()) {
    throw InvalidInput(a.q_path + ": has " + std::to_string(q.data.cols()) + " columns but " + a.p_path +
                       " has " + std::to_string(p.data.cols()));
  }
  const auto r = estimate_kl(p.data, q.data, cfg);
  auto doc = estimate_json(r, a.est, a.output.bits);
  doc["command"] = "estimate-kl";
  write_output(a.output.out, render(doc, a.output));
  return 0;
}

int run_estimate_mi(const MiArgs& a) {
  const CsvDataset ds = read_csv(a.data_path);
  ColumnSplit split{resolve_columns(ds, "--x-cols", a.x_cols), resolve_columns(ds, "--y-cols", a.y_cols)};
  try {
    split.validate(ds.data.cols());
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("--x-cols/--y-cols: ") + e.what());
  }
  nlohmann::json doc;
  const auto kind = parse_estimator_kind(a.estimator);
  if (kind == EstimatorKind::kkle) {
    doc = estimate_json(estimate_mi(ds.data, split, a.est.kkle_config()), a.est, a.output.bits);
  } else {
    doc = estimate_json(mine_estimate_mi(ds.data, split, a.est.mine_config(a.hidden)), a.output.bits);
  }
  doc["command"] = "estimate-mi";
  write_output(a.output.out, render(doc, a.output));
  return 0;
}

int run_benchmark_cmd(const BenchmarkArgs& a) {
  BenchmarkConfig cfg;
  if (a.protocol == "small") {
    cfg = BenchmarkConfig::small_data();
  } else if (a.protocol == "large") {
    cfg = BenchmarkConfig::large_data();
  } else {
    throw InvalidInput("--protocol: expected small or large, got '" + a.protocol + "'");
  }
  cfg.estimators.clear();
  for (const auto& e : split_list(a.estimators)) cfg.estimators.push_back(parse_estimator_kind(e));
  if (!a.dims.empty()) {
    cfg.dims.clear();
    for (const auto& d : split_list(a.dims)) {
      const double v = parse_real("--dims", d);
      if (v != static_cast<double>(static_cast<Index>(v)) || v < 1) {
        throw InvalidInput("--dims: not a positive integer: '" + d + "'");
      }
      cfg.dims.push_back(static_cast<Index>(v));
    }
  }
  if (!a.rhos.empty()) {
    cfg.rhos.clear();
    for (const auto& r : split_list(a.rhos)) cfg.rhos.push_back(parse_real("--rhos", r));
  }
  if (a.n) {
    cfg.sample_count = *a.n;
    if (a.protocol == "small") cfg.kkle.optimizer.batch_size = cfg.mine.optimizer.batch_size = *a.n;
  }
  if (a.trials) cfg.trials = *a.trials;
  if (a.kkle_step) cfg.kkle.optimizer.step_size = *a.kkle_step;
  if (a.mine_step) cfg.mine.optimizer.step_size = *a.mine_step;
  cfg.seed = a.seed;
  cfg.jobs = a.jobs;
  const auto format = parse_report_format(a.output.format);
  const auto report = run_benchmark(cfg);
  std::ostringstream out;
  emit_report(report, format, out);
  write_output(a.output.out, out.str());
  return 0;
}

int run_fairness(const FairnessArgs& a) {
  FairnessConfig cfg;
  cfg.estimator = a.est.kkle_config();
  cfg.jitter = a.jitter;

  AuditRequest req;
  req.demographic_parity = false;
  const auto metrics = a.metrics.empty() ? std::vector<std::string>{"demographic_parity"} : split_list(a.metrics);
  for (const auto& m : metrics) {
    if (m == "demographic_parity" || m == "dp") {
      req.demographic_parity = true;
    } else if (m == "equality_of_odds" || m == "odds") {
      req.equality_of_odds = true;
    } else if (m == "equality_of_opportunity" || m == "opportunity") {
      req.equality_of_opportunity = true;
    } else if (m == "all") {
      req.demographic_parity = req.equality_of_odds = req.equality_of_opportunity = true;
    } else {
      throw InvalidInput("--metrics: unknown metric '" + m + "'");
    }
  }
  if (a.metrics.empty() && !a.label_col.empty()) req.equality_of_odds = req.equality_of_opportunity = true;
  if ((req.equality_of_odds || req.equality_of_opportunity) && a.label_col.empty()) {
    throw InvalidInput("--label-col is required for equality_of_odds and equality_of_opportunity");
  }
  if (a.positive_class) req.positive_class = *a.positive_class;

  const CsvDataset ds = read_csv(a.data_path);
  AuditTable table;
  table.predictions = ds.data.col(resolve_column(ds, "--pred-col", a.pred_col));
  table.attribute = ds.data.col(resolve_column(ds, "--attr-col", a.attr_col));
  if (!a.label_col.empty()) table.labels = ds.data.col(resolve_column(ds, "--label-col", a.label_col));

  auto doc = fairness_json(audit(table, cfg, req), a.output.bits);
  doc["command"] = "fairness";
  doc["rows"] = table.rows();
  write_output(a.output.out, render(doc, a.output));
  return 0;
}

int run_generate(const GenerateArgs& a) {
  GaussianPairSpec spec;
  spec.dimension = a.dim;
  spec.rho = a.rho;
  spec.sample_count = a.n;
  spec.seed = a.seed;
  CsvDataset ds;
  ds.data = sample_gaussian_pairs(spec);
  for (const char* prefix : {"x", "y"}) {
    for (Index k = 1; k <= a.dim; ++k) ds.header.push_back(prefix + std::to_string(k));
  }
  std::ostringstream out;
  write_csv(out, ds);
  write_output(a.out, out.str());
  return 0;
}

}  // namespace kkle::cli
