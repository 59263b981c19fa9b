#pragma once

#include <optional>
#include <vector>

#include "kkle/estimator.hpp"
#include "kkle/linalg.hpp"

namespace kkle {

/// Prediction log: predictions Y^p, protected attribute A and optional
/// categorical ground truth Y, one entry per row.
struct AuditTable {
  Vector predictions;
  Vector attribute;
  std::optional<Vector> labels;

  Index rows() const { return predictions.size(); }
  void validate() const;
};

struct FairnessConfig {
  /// optimizer.seed seeds the jitter and every estimate.
  EstimatorConfig estimator;
  /// Half-width of the seeded uniform noise added to discrete columns before
  /// estimation. 0 disables it.
  double jitter = 1e-3;
  /// A column with at most this many distinct values counts as discrete.
  Index discrete_max_levels = 16;
  /// Classes with fewer rows are skipped by the conditional metrics.
  Index min_class_rows = 4;

  void validate() const;
};

struct FairnessMetric {
  double mi = 0.0;
  /// Y^p or A was constant on the rows used; mi is 0 without estimation.
  bool degenerate = false;
};

struct ClassDetail {
  double label = 0.0;
  Index rows = 0;
  /// Empirical frequency among the classes that were not skipped.
  double weight = 0.0;
  double mi = 0.0;
  bool skipped = false;
  bool degenerate = false;
};

struct OddsMetric {
  /// sum over non-skipped classes of weight * mi.
  double mi = 0.0;
  /// Sorted by label; includes skipped classes with zero weight.
  std::vector<ClassDetail> classes;
};

/// I(Y^p; A).
FairnessMetric demographic_parity(const AuditTable& table, const FairnessConfig& cfg);

/// I(Y^p; A | Y) as the frequency-weighted sum of per-class MI.
OddsMetric equality_of_odds(const AuditTable& table, const FairnessConfig& cfg);

/// I(Y^p; A | Y = positive_class). Uses the same noise and seeds as the
/// matching term of equality_of_odds, so the two agree exactly.
FairnessMetric equality_of_opportunity(const AuditTable& table, const FairnessConfig& cfg,
                                       double positive_class);

struct FairnessReport {
  std::optional<FairnessMetric> demographic_parity;
  std::optional<OddsMetric> equality_of_odds;
  std::optional<FairnessMetric> equality_of_opportunity;
  std::optional<double> positive_class;
};

struct AuditRequest {
  bool demographic_parity = true;
  bool equality_of_odds = false;
  bool equality_of_opportunity = false;
  double positive_class = 1.0;
};

FairnessReport audit(const AuditTable& table, const FairnessConfig& cfg, const AuditRequest& request);

}  // namespace kkle
