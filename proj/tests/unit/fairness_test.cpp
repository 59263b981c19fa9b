#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "kkle/error.hpp"
#include "kkle/fairness.hpp"
#include "oracles.hpp"

using namespace kkle;

namespace {

FairnessConfig config(Seed seed = 0) {
  FairnessConfig c;
  c.estimator.optimizer.seed = seed;
  return c;
}

AuditTable restrict(const AuditTable& t, double label) {
  std::vector<Index> rows;
  for (Index i = 0; i < t.rows(); ++i) {
    if ((*t.labels)(i) == label) rows.push_back(i);
  }
  AuditTable r{t.predictions(rows), t.attribute(rows), Vector(t.labels->operator()(rows))};
  return r;
}

}  // namespace

TEST(AuditTable, Validation) {
  AuditTable t{Vector::Zero(5), Vector::Zero(4), std::nullopt};
  EXPECT_THROW(t.validate(), InvalidInput);
  t.attribute = Vector::Zero(5);
  t.labels = Vector::Zero(3);
  EXPECT_THROW(t.validate(), InvalidInput);
  t.labels = Vector::Zero(5);
  EXPECT_NO_THROW(t.validate());
  t.predictions(2) = std::nan("");
  EXPECT_THROW(t.validate(), InvalidInput);
}

TEST(DemographicParity, IndependentFixture) {
  const auto r = demographic_parity(fixtures::independent(10000, 1), config());
  EXPECT_LE(r.mi, 0.02);
  EXPECT_GE(r.mi, 0.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(DemographicParity, CopiedCoinIsLogTwo) {
  const auto r = demographic_parity(fixtures::copied_coin(10000, 2), config());
  EXPECT_NEAR(r.mi, std::numbers::ln2, 0.05);
}

TEST(DemographicParity, ContinuousAttribute) {
  const auto t = fixtures::thresholded_income(10000, 3);
  std::vector<int> pred_bin, attr_bin;
  std::vector<double> sorted(t.attribute.begin(), t.attribute.end());
  std::sort(sorted.begin(), sorted.end());
  for (Index i = 0; i < t.rows(); ++i) {
    pred_bin.push_back(t.predictions(i) > 0 ? 1 : 0);
    attr_bin.push_back(int(std::lower_bound(sorted.begin(), sorted.end(), t.attribute(i)) - sorted.begin()) * 10 /
                       int(sorted.size()));
  }
  const double plugin = oracle::plugin_mi(pred_bin, attr_bin);
  ASSERT_GT(plugin, 0.3);
  EXPECT_GT(demographic_parity(t, config()).mi, 0.3);
}

TEST(DemographicParity, ConstantColumnIsDegenerate) {
  auto t = fixtures::independent(200, 4);
  t.predictions.setConstant(1.0);
  const auto r = demographic_parity(t, config());
  EXPECT_EQ(r.mi, 0.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_THROW(demographic_parity(fixtures::independent(3, 4), config()), InvalidInput);
}

TEST(DemographicParity, SeededJitterIsDeterministic) {
  const auto t = fixtures::copied_coin(2000, 5);
  EXPECT_EQ(demographic_parity(t, config(7)).mi, demographic_parity(t, config(7)).mi);
  auto c = config(7);
  c.jitter = 0.0;
  EXPECT_NO_THROW(demographic_parity(fixtures::independent(500, 5), c));
}

TEST(EqualityOfOdds, IndependentWithinClasses) {
  const auto r = equality_of_odds(fixtures::independent(10000, 6), config());
  EXPECT_LE(r.mi, 0.03);
  ASSERT_EQ(r.classes.size(), 2u);
}

TEST(EqualityOfOdds, CopiedInOneClass) {
  const auto r = equality_of_odds(fixtures::copied_in_class_one(10000, 7), config());
  EXPECT_NEAR(r.mi, 0.5 * std::numbers::ln2, 0.05);
}

TEST(EqualityOfOdds, DecompositionIsExact) {
  const auto t = fixtures::copied_in_class_one(4000, 8);
  const auto cfg = config(3);
  const auto r = equality_of_odds(t, cfg);
  double weights = 0.0, sum = 0.0;
  for (const auto& c : r.classes) {
    const double n = double(restrict(t, c.label).rows());
    EXPECT_EQ(c.weight, n / double(t.rows()));
    EXPECT_EQ(c.mi, equality_of_opportunity(t, cfg, c.label).mi);
    weights += c.weight;
    sum += c.weight * c.mi;
  }
  EXPECT_DOUBLE_EQ(weights, 1.0);
  EXPECT_EQ(r.mi, sum);
}

TEST(EqualityOfOdds, SingleClassEqualsDemographicParity) {
  auto t = fixtures::copied_coin(3000, 9);
  t.labels->setConstant(1.0);
  const auto cfg = config(2);
  const auto odds = equality_of_odds(t, cfg);
  EXPECT_EQ(odds.mi, demographic_parity(t, cfg).mi);
  EXPECT_EQ(odds.mi, equality_of_opportunity(t, cfg, 1.0).mi);
}

TEST(EqualityOfOdds, SmallClassesAreSkipped) {
  auto t = fixtures::independent(400, 10);
  for (Index i = 0; i < 3; ++i) (*t.labels)(i) = 7.0;
  const auto r = equality_of_odds(t, config());
  ASSERT_EQ(r.classes.size(), 3u);
  const auto& small = r.classes.back();
  EXPECT_EQ(small.label, 7.0);
  EXPECT_TRUE(small.skipped);
  EXPECT_EQ(small.weight, 0.0);
  EXPECT_DOUBLE_EQ(r.classes[0].weight + r.classes[1].weight, 1.0);
  AuditTable tiny{Vector::LinSpaced(3, 0, 1), Vector::LinSpaced(3, 1, 0), Vector::LinSpaced(3, 0, 2)};
  EXPECT_THROW(equality_of_odds(tiny, config()), InvalidInput);
  AuditTable unlabeled{Vector::Zero(10), Vector::Zero(10), std::nullopt};
  EXPECT_THROW(equality_of_odds(unlabeled, config()), InvalidInput);
}

TEST(EqualityOfOpportunity, Fixtures) {
  EXPECT_LE(equality_of_opportunity(fixtures::independent(10000, 11), config(), 1.0).mi, 0.03);
  EXPECT_NEAR(equality_of_opportunity(fixtures::copied_in_class_one(10000, 12), config(), 1.0).mi,
              std::numbers::ln2, 0.05);
  EXPECT_THROW(equality_of_opportunity(fixtures::independent(100, 13), config(), 5.0), InvalidInput);
}

TEST(Audit, CollectsRequestedMetrics) {
  const auto t = fixtures::independent(500, 14);
  AuditRequest req;
  req.equality_of_odds = true;
  req.equality_of_opportunity = true;
  const auto r = audit(t, config(), req);
  ASSERT_TRUE(r.demographic_parity && r.equality_of_odds && r.equality_of_opportunity);
  EXPECT_EQ(*r.positive_class, 1.0);
  EXPECT_GE(r.demographic_parity->mi, 0.0);
  EXPECT_GE(r.equality_of_odds->mi, 0.0);
  EXPECT_GE(r.equality_of_opportunity->mi, 0.0);
  req = AuditRequest{};
  const auto only = audit(t, config(), req);
  EXPECT_TRUE(only.demographic_parity);
  EXPECT_FALSE(only.equality_of_odds);
}
