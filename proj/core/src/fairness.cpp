#include "kkle/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "kkle/error.hpp"

namespace kkle {
namespace {

bool is_discrete(const Vector& v, Index max_levels) {
  std::set<double> levels;
  for (const double x : v) {
    levels.insert(x);
    if (static_cast<Index>(levels.size()) > max_levels) return false;
  }
  return true;
}

bool is_constant(const Vector& v) { return v.size() == 0 || (v.array() == v(0)).all(); }

Vector jittered(const Vector& v, const FairnessConfig& cfg, std::string_view tag) {
  if (cfg.jitter == 0.0 || !is_discrete(v, cfg.discrete_max_levels)) return v;
  Rng rng(derive_seed(cfg.estimator.optimizer.seed, tag));
  std::uniform_real_distribution<double> noise(-cfg.jitter, cfg.jitter);
  Vector out = v;
  for (auto& x : out) x += noise(rng);
  return out;
}

/// Table columns as used for estimation: jitter applied once over all rows.
struct Prepared {
  Vector pred;
  Vector attr;
};

Prepared prepare(const AuditTable& t, const FairnessConfig& cfg) {
  return {jittered(t.predictions, cfg, "jitter-predictions"), jittered(t.attribute, cfg, "jitter-attribute")};
}

FairnessMetric mi_on_rows(const AuditTable& raw, const Prepared& p, const std::vector<Index>& rows,
                          const FairnessConfig& cfg) {
  const Vector raw_pred = raw.predictions(rows);
  const Vector raw_attr = raw.attribute(rows);
  if (is_constant(raw_pred) || is_constant(raw_attr)) return {0.0, true};
  SampleSet pairs(static_cast<Index>(rows.size()), 2);
  pairs.col(0) = p.pred(rows);
  pairs.col(1) = p.attr(rows);
  const auto r = estimate_mi(pairs, ColumnSplit{{0}, {1}}, cfg.estimator);
  return {r.kl_estimate, r.degenerate};
}

std::map<double, std::vector<Index>> class_rows(const AuditTable& t) {
  if (!t.labels) throw InvalidInput("conditional fairness metrics need a label column");
  std::map<double, std::vector<Index>> out;
  for (Index i = 0; i < t.rows(); ++i) out[(*t.labels)(i)].push_back(i);
  return out;
}

std::string label_text(double v) {
  if (v == std::round(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return std::to_string(v);
}

}  // namespace

void AuditTable::validate() const {
  if (attribute.size() != predictions.size() || (labels && labels->size() != predictions.size())) {
    throw InvalidInput("audit table columns differ in length");
  }
  if (!predictions.allFinite() || !attribute.allFinite() || (labels && !labels->allFinite())) {
    throw InvalidInput("audit table contains non-finite values");
  }
}

void FairnessConfig::validate() const {
  estimator.validate();
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw InvalidInput("jitter must be a finite nonnegative number");
  if (discrete_max_levels < 1) throw InvalidInput("discrete_max_levels must be positive");
  if (min_class_rows < 4) throw InvalidInput("min_class_rows must be at least 4");
}

FairnessMetric demographic_parity(const AuditTable& table, const FairnessConfig& cfg) {
  table.validate();
  cfg.validate();
  if (table.rows() < 4) {
    throw InvalidInput("demographic parity needs at least 4 rows (got " + std::to_string(table.rows()) + ")");
  }
  std::vector<Index> all(static_cast<std::size_t>(table.rows()));
  for (Index i = 0; i < table.rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  return mi_on_rows(table, prepare(table, cfg), all, cfg);
}

OddsMetric equality_of_odds(const AuditTable& table, const FairnessConfig& cfg) {
  table.validate();
  cfg.validate();
  const auto classes = class_rows(table);
  const Prepared p = prepare(table, cfg);
  OddsMetric out;
  Index used_rows = 0;
  for (const auto& [label, rows] : classes) {
    ClassDetail d;
    d.label = label;
    d.rows = static_cast<Index>(rows.size());
    d.skipped = d.rows < cfg.min_class_rows;
    if (!d.skipped) {
      const auto m = mi_on_rows(table, p, rows, cfg);
      d.mi = m.mi;
      d.degenerate = m.degenerate;
      used_rows += d.rows;
    }
    out.classes.push_back(d);
  }
  if (used_rows == 0) {
    throw InvalidInput("equality of odds: every class has fewer than " + std::to_string(cfg.min_class_rows) +
                       " rows");
  }
  for (auto& d : out.classes) {
    if (d.skipped) continue;
    d.weight = static_cast<double>(d.rows) / static_cast<double>(used_rows);
    out.mi += d.weight * d.mi;
  }
  return out;
}

FairnessMetric equality_of_opportunity(const AuditTable& table, const FairnessConfig& cfg, double positive_class) {
  table.validate();
  cfg.validate();
  const auto classes = class_rows(table);
  const auto it = classes.find(positive_class);
  if (it == classes.end()) {
    throw InvalidInput("positive class " + label_text(positive_class) + " does not occur in the label column");
  }
  if (static_cast<Index>(it->second.size()) < cfg.min_class_rows) {
    throw InvalidInput("positive class " + label_text(positive_class) + " has only " +
                       std::to_string(it->second.size()) + " rows (need " + std::to_string(cfg.min_class_rows) +
                       ")");
  }
  return mi_on_rows(table, prepare(table, cfg), it->second, cfg);
}

FairnessReport audit(const AuditTable& table, const FairnessConfig& cfg, const AuditRequest& request) {
  FairnessReport r;
  if (request.demographic_parity) r.demographic_parity = demographic_parity(table, cfg);
  if (request.equality_of_odds) r.equality_of_odds = equality_of_odds(table, cfg);
  if (request.equality_of_opportunity) {
    r.equality_of_opportunity = equality_of_opportunity(table, cfg, request.positive_class);
    r.positive_class = request.positive_class;
  }
  return r;
}

}  // namespace kkle
