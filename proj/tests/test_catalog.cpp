#include "semaudit/catalog.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "semaudit/catalogs.hpp"
#include "test_util.hpp"

namespace semaudit {
namespace {

using testing::R;

bool has_rule(const std::vector<Violation>& violations, const std::string& rule) {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
}

TEST(ClassMassTest, PointMass) {
  const Catalog cat = deterministic_catalog();
  const auto mass = labeled_class_mass(cat, point_mass(cat, "H1-orig"));
  for (const auto& [cls, value] : mass) EXPECT_EQ(value, cls == "H1" ? Rational(1) : Rational(0)) << cls;
}

TEST(ClassMassTest, Uniform) {
  const Catalog cat = deterministic_catalog();
  const auto mass = labeled_class_mass(cat, uniform_strategy(cat));
  for (const auto& [cls, value] : mass) {
    EXPECT_EQ(value, cls[0] == 'B' ? Rational(1, 10) : Rational(2, 10)) << cls;
  }
}

TEST(ClassMassTest, EnvelopeOptimumMix) {
  const Catalog cat = deterministic_catalog();
  // Budget 0.20 on the B4/H1-manip edge: 0.14·w + 0.95·(1 − w) = 0.20.
  const Rational w(25, 27);
  const Strategy x = strategy_from_masses(cat, {{"B4", w}, {"H1-manip", 1 - w}});
  const auto mass = labeled_class_mass(cat, x);
  EXPECT_EQ(mass.at("B4"), w);
  EXPECT_EQ(mass.at("H1"), Rational(2, 27));
  EXPECT_EQ(to_fixed(mass.at("B4"), 4), "0.9259");
  EXPECT_EQ(to_fixed(mass.at("H1"), 4), "0.0741");
}

TEST(ClassMassTest, DimensionMismatchRejected) {
  const Catalog cat = deterministic_catalog();
  EXPECT_THROW(class_mass(cat, RationalVector::Zero(3).eval()), std::invalid_argument);
}

TEST(StrategyTest, RejectsUnknownIdsAndNonDistributions) {
  const Catalog cat = deterministic_catalog();
  EXPECT_THROW(strategy_from_masses(cat, {{"nope", Rational(1)}}), std::invalid_argument);
  EXPECT_THROW(strategy_from_masses(cat, {{"B1", R("0.5")}}), std::invalid_argument);
  EXPECT_THROW(strategy_from_masses(cat, {{"B1", R("1.5")}, {"B2", R("-0.5")}}), std::invalid_argument);
  EXPECT_THROW(point_mass(cat, "missing"), std::invalid_argument);
  EXPECT_TRUE(is_distribution(strategy_from_masses(cat, {{"B1", R("0.25")}, {"H3-manip", R("0.75")}})));
}

TEST(ExposureReportTest, HarmfulPointMass) {
  const Catalog cat = deterministic_catalog();
  const auto r = exposure_report(cat, point_mass(cat, "H2-manip"));
  EXPECT_EQ(r.true_harm, 1);
  EXPECT_EQ(r.utility, R("0.76"));
  EXPECT_EQ(r.audited_harm, 1);
  ASSERT_TRUE(r.ideal_harm.has_value());
  EXPECT_EQ(*r.ideal_harm, 1);
  EXPECT_EQ(r.disagreement_mass, 0);
}

TEST(ExposureReportTest, BenignPointMass) {
  const Catalog cat = deterministic_catalog();
  const auto r = exposure_report(cat, point_mass(cat, "B1"));
  EXPECT_EQ(r.true_harm, 0);
  EXPECT_EQ(r.utility, R("0.55"));
}

TEST(ExposureReportTest, IdealHarmOnlyWithIdealLabelsEverywhere) {
  std::vector<Variant> v{{"a", "A", 1, R("0.5"), R("0.5")}, {"b", "B", 0, R("0.1"), R("0.2")}};
  const Catalog partial = Catalog::from_variants(v, {{"A", 1}, {"B", 0}}, {{"A", 1}});
  EXPECT_FALSE(exposure_report(partial, uniform_strategy(partial)).ideal_harm.has_value());
  const Catalog full = Catalog::from_variants(v, {{"A", 1}, {"B", 0}}, {{"A", 1}, {"B", 0}});
  EXPECT_EQ(*exposure_report(full, uniform_strategy(full)).ideal_harm, Rational(1, 2));
}

TEST(ExposureReportTest, DisagreementBoundsLabelGap) {
  // Class A is audited benign but holds a harmful variant.
  std::vector<Variant> v{{"a1", "A", 1, R("0.3"), R("0.9")},
                         {"a2", "A", 0, R("0.2"), R("0.4")},
                         {"b", "B", 0, R("0.1"), R("0.5")}};
  const Catalog cat = Catalog::from_variants(v, {{"A", 0}, {"B", 0}});
  const Strategy x = strategy_from_masses(cat, {{"a1", R("0.6")}, {"b", R("0.4")}});
  const auto r = exposure_report(cat, x);
  EXPECT_EQ(r.true_harm, R("0.6"));
  EXPECT_EQ(r.audited_harm, 0);
  EXPECT_EQ(r.disagreement_mass, R("0.6"));
}

TEST(ExposureReportTest, WorksInDoublePrecision) {
  const Catalog cat = deterministic_catalog();
  const Vector<double> x = scalar_cast<double>(uniform_strategy(cat));
  const auto r = exposure_report(cat, x);
  EXPECT_NEAR(r.true_harm, 0.6, 1e-12);
  EXPECT_NEAR(r.class_masses.sum(), 1.0, 1e-12);
}

TEST(ValidateCatalogTest, BuiltInCatalogsAreValid) {
  EXPECT_TRUE(validate_catalog(deterministic_catalog()).empty());
  EXPECT_TRUE(validate_catalog(six_variant_catalog()).empty());
  EXPECT_TRUE(validate_catalog(hatecheck_catalog()).empty());
  EXPECT_NO_THROW(require_valid(deterministic_catalog()));
}

TEST(ValidateCatalogTest, HarmPurityViolation) {
  std::vector<Variant> v{{"a1", "A", 1, R("0.3"), R("0.9")}, {"a2", "A", 0, R("0.2"), R("0.4")}};
  const Catalog cat = Catalog::from_variants(v, {{"A", 1}}, {{"A", 1}});
  const auto violations = validate_catalog(cat);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].subject, "A");
  EXPECT_EQ(violations[0].rule, "harm-purity");
  EXPECT_THROW(require_valid(cat), std::invalid_argument);
}

TEST(ValidateCatalogTest, ScoreRangeViolation) {
  std::vector<Variant> v{{"a", "A", 1, R("1.2"), R("0.9")}};
  const auto violations = validate_catalog(Catalog::from_variants(v));
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].subject, "a");
  EXPECT_EQ(violations[0].rule, "score-range");
}

TEST(ValidateCatalogTest, StructuralViolations) {
  std::vector<Variant> v{{"a", "A", 2, R("0.5"), R("-1")}, {"a", "A", 0, R("0.5"), R("0.1")}};
  const auto violations = validate_catalog(Catalog::from_variants(v));
  EXPECT_TRUE(has_rule(violations, "latent-harm-binary"));
  EXPECT_TRUE(has_rule(violations, "utility-range"));
  EXPECT_TRUE(has_rule(violations, "duplicate-variant"));

  // A class table that misses a variant and lists an unknown one.
  Catalog broken({{"a", "A", 0, R("0.5"), R("0.1")}, {"b", "B", 0, R("0.5"), R("0.1")}},
                 {{"A", {"a", "ghost"}, 0, std::nullopt}, {"C", {}, 0, std::nullopt}});
  const auto structural = validate_catalog(broken);
  EXPECT_FALSE(structural.empty());
  for (const auto& s : structural) EXPECT_FALSE(s.subject.empty());
}

TEST(CatalogInvariantsTest, ClassMassSumsToOneAndReportIsLinear) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Catalog cat = testing::random_catalog(rng, {2, 8, false, 0.3});
    const Strategy x = testing::random_strategy(rng, cat.size());
    const Strategy y = testing::random_strategy(rng, cat.size());
    const Rational lambda(testing::draw_int(rng, 0, 7), 7);
    EXPECT_EQ(class_mass(cat, x).sum(), 1);

    const Strategy mix = lambda * x + (1 - lambda) * y;
    const auto rx = exposure_report(cat, x), ry = exposure_report(cat, y), rm = exposure_report(cat, mix);
    EXPECT_EQ(rm.true_harm, lambda * rx.true_harm + (1 - lambda) * ry.true_harm);
    EXPECT_EQ(rm.audited_harm, lambda * rx.audited_harm + (1 - lambda) * ry.audited_harm);
    EXPECT_EQ(rm.utility, lambda * rx.utility + (1 - lambda) * ry.utility);
    EXPECT_EQ(rm.disagreement_mass, lambda * rx.disagreement_mass + (1 - lambda) * ry.disagreement_mass);
    EXPECT_EQ(rm.class_masses, (lambda * rx.class_masses + (1 - lambda) * ry.class_masses).eval());
    const Rational gap = rx.true_harm - rx.audited_harm;
    EXPECT_LE(gap < 0 ? Rational(-gap) : gap, rx.disagreement_mass);
  }
}

TEST(CatalogInvariantsTest, HarmPureCatalogsHaveNoDisagreement) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Catalog cat = testing::random_catalog(rng);
    const auto r = exposure_report(cat, testing::random_strategy(rng, cat.size()));
    EXPECT_EQ(r.disagreement_mass, 0);
    EXPECT_EQ(r.true_harm, r.audited_harm);
    EXPECT_EQ(r.true_harm, *r.ideal_harm);
  }
}

}  // namespace
}  // namespace semaudit
