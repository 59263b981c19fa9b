#include "output.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "kkle/csv.hpp"
#include "kkle/error.hpp"

namespace kkle::cli {
namespace {

nlohmann::json trace_json(const OptimizationTrace& t) {
  return {{"converged", t.converged}, {"iterations", t.iterations}};
}

nlohmann::json optimizer_json(const OptimizerConfig& c) {
  return {{"step_size", c.step_size},         {"max_iter", c.max_iter},
          {"gamma", c.gamma},                 {"batch_size", c.batch_size},
          {"penalty_weight", c.penalty_weight}, {"norm_budget", c.norm_budget},
          {"seed", c.seed}};
}

nlohmann::json metric_json(const FairnessMetric& m, bool bits) {
  return {{"mi", display_value(m.mi, bits)}, {"degenerate", m.degenerate}};
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::ostringstream& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else if (it->is_number_float()) {
      out << key << " = " << format_double(it->get<double>()) << '\n';
    } else if (it->is_string()) {
      out << key << " = " << it->get<std::string>() << '\n';
    } else {
      out << key << " = " << it->dump() << '\n';
    }
  }
}

}  // namespace

double display_value(double nats, bool bits) { return bits ? nats / std::numbers::ln2 : nats; }

const char* unit_name(bool bits) { return bits ? "bits" : "nats"; }

nlohmann::json estimate_json(const EstimateResult& r, const EstimatorFlags& flags, bool bits) {
  nlohmann::json config = optimizer_json(r.config.optimizer);
  config["estimator"] = "kkle";
  config["mode"] = r.config.mode == Mode::dual ? "dual" : "primal";
  config["feature_dim"] = r.config.feature_dim;
  config["bandwidth"] = flags.bandwidth == "median" ? nlohmann::json("median") : nlohmann::json(r.bandwidth);
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"value", display_value(r.kl_estimate, bits)},
                   {"raw_value", display_value(r.raw_estimate, bits)},
                   {"units", unit_name(bits)},
                   {"degenerate", r.degenerate},
                   {"bandwidth", r.bandwidth},
                   {"n", r.n},
                   {"m", r.m},
                   {"config", config}};
  j.update(trace_json(r.trace));
  return j;
}

nlohmann::json estimate_json(const MineResult& r, bool bits) {
  nlohmann::json config = optimizer_json(r.config.optimizer);
  config.erase("penalty_weight");
  config.erase("norm_budget");
  config["estimator"] = "mine";
  config["hidden_width"] = r.config.hidden_width;
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"value", display_value(r.kl_estimate, bits)},
                   {"raw_value", display_value(r.raw_estimate, bits)},
                   {"units", unit_name(bits)},
                   {"degenerate", r.degenerate},
                   {"n", r.n},
                   {"m", r.m},
                   {"config", config}};
  j.update(trace_json(r.trace));
  return j;
}

nlohmann::json fairness_json(const FairnessReport& r, bool bits) {
  nlohmann::json j{{"schema_version", kSchemaVersion}, {"units", unit_name(bits)}};
  if (r.demographic_parity) j["demographic_parity"] = metric_json(*r.demographic_parity, bits);
  if (r.equality_of_odds) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : r.equality_of_odds->classes) {
      classes.push_back({{"label", c.label},
                         {"rows", c.rows},
                         {"weight", c.weight},
                         {"mi", display_value(c.mi, bits)},
                         {"skipped", c.skipped},
                         {"degenerate", c.degenerate}});
    }
    j["equality_of_odds"] = {{"mi", display_value(r.equality_of_odds->mi, bits)}, {"per_class", classes}};
  }
  if (r.equality_of_opportunity) {
    j["equality_of_opportunity"] = metric_json(*r.equality_of_opportunity, bits);
    j["equality_of_opportunity"]["positive_class"] = *r.positive_class;
  }
  return j;
}

std::string text_lines(const nlohmann::json& doc) {
  std::ostringstream out;
  flatten(doc, "", out);
  return out.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("--out: cannot open " + path + " for writing");
  out << content;
  if (!out) throw InvalidInput("--out: write to " + path + " failed");
}

}  // namespace kkle::cli
