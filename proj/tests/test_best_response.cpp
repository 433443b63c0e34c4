#include "semaudit/best_response.hpp"

#include <gtest/gtest.h>

#include <random>

#include "semaudit/catalogs.hpp"
#include "test_util.hpp"

namespace semaudit {
namespace {

using testing::R;

BestResponse<Rational> solve_at(const Catalog& cat, ScoreKind kind, const char* tau) {
  auto br = solve(cat, make_lp(cat, kind, R(tau)));
  if (!br) throw std::runtime_error("infeasible");
  return *br;
}

std::string triple(const BestResponse<Rational>& br) {
  return to_fixed(br.utility) + "/" + to_fixed(br.report.true_harm) + "/" + to_fixed(br.measured);
}

TEST(SolveTest, DeterministicTriples) {
  const Catalog cat = deterministic_catalog();
  EXPECT_EQ(triple(solve_at(cat, ScoreKind::kFragile, "0.10")), "0.760/1.000/0.100");
  EXPECT_EQ(triple(solve_at(cat, ScoreKind::kEnvelope, "0.10")), "0.620/0.000/0.100");
  EXPECT_EQ(triple(solve_at(cat, ScoreKind::kFragile, "0.15")), "0.820/1.000/0.150");
  EXPECT_EQ(triple(solve_at(cat, ScoreKind::kEnvelope, "0.15")), "0.662/0.012/0.150");
  EXPECT_EQ(triple(solve_at(cat, ScoreKind::kFragile, "0.20")), "0.820/1.000/0.150");
  EXPECT_EQ(triple(solve_at(cat, ScoreKind::kEnvelope, "0.20")), "0.672/0.074/0.200");
}

TEST(SolveTest, SupportsAndExactValues) {
  const Catalog cat = deterministic_catalog();
  const auto frag = solve_at(cat, ScoreKind::kFragile, "0.10");
  EXPECT_EQ(frag.support, (std::vector<std::string>{"H2-manip"}));
  EXPECT_EQ(frag.strategy, point_mass(cat, "H2-manip"));
  const auto env = solve_at(cat, ScoreKind::kEnvelope, "0.20");
  EXPECT_EQ(env.support, (std::vector<std::string>{"B4", "H1-manip"}));
  EXPECT_EQ(env.report.true_harm, Rational(2, 27));
  EXPECT_EQ(solve_at(cat, ScoreKind::kEnvelope, "0.15").report.true_harm, Rational(1, 81));
}

TEST(SolveTest, ClassMeanRepair) {
  const Catalog cat = deterministic_catalog();
  const auto br = solve_at(cat, ScoreKind::kClassMean, "0.20");
  EXPECT_EQ(to_fixed(br.utility), "0.683");
  EXPECT_EQ(to_fixed(br.report.true_harm), "0.146");
}

TEST(SolveTest, InfeasibleAndBadInput) {
  const Catalog cat = deterministic_catalog();
  EXPECT_FALSE(solve(cat, make_lp(cat, ScoreKind::kFragile, R("0.01"))).has_value());
  EXPECT_THROW(solve(cat, make_lp(cat, ScoreKind::kFragile, R("-0.1"))), std::invalid_argument);
  BudgetedLP lp = make_lp(cat, ScoreKind::kFragile, R("0.2"));
  lp.utilities = RationalVector::Zero(3);
  EXPECT_THROW(solve(cat, lp), std::invalid_argument);
}

TEST(SolveTest, TiesPreferLessHarm) {
  std::vector<Variant> v{{"h", "H", 1, R("0.1"), R("0.5")}, {"b", "B", 0, R("0.1"), R("0.5")}};
  const Catalog cat = Catalog::from_variants(v);
  const auto br = solve(cat, make_lp(cat, ScoreKind::kFragile, R("0.2")));
  ASSERT_TRUE(br);
  EXPECT_EQ(br->support, (std::vector<std::string>{"b"}));
  EXPECT_EQ(br->tied_candidates, 1);
}

TEST(SolveTest, DoublePathAgrees) {
  const Catalog cat = deterministic_catalog();
  const auto exact = solve_at(cat, ScoreKind::kEnvelope, "0.20");
  const auto approx = solve<double>(cat, make_lp(cat, ScoreKind::kEnvelope, R("0.20")));
  ASSERT_TRUE(approx);
  EXPECT_NEAR(approx->utility, to_double(exact.utility), 1e-12);
  EXPECT_EQ(approx->support, exact.support);
}

TEST(TrajectoryTest, Examples) {
  const Catalog cat = deterministic_catalog();
  std::vector<Rational> taus;
  for (int i = 1; i <= 19; ++i) taus.push_back(Rational(i, 20));
  const auto frag = trajectory(cat, fragile_score(cat), taus);
  const auto env = trajectory(cat, envelope_lift(cat), taus);
  // At 0.05 only B1 fits the budget.
  ASSERT_TRUE(frag[0].response);
  EXPECT_EQ(frag[0].response->support, (std::vector<std::string>{"B1"}));
  EXPECT_EQ(frag[0].response->report.true_harm, 0);
  for (std::size_t i = 1; i < taus.size(); ++i) {
    ASSERT_TRUE(frag[i].response && env[i].response) << to_fixed(taus[i]);
    EXPECT_EQ(frag[i].response->report.true_harm, 1) << to_fixed(taus[i]);
  }
  EXPECT_EQ(frag.back().response->support, (std::vector<std::string>{"H1-manip"}));
  EXPECT_EQ(frag.back().response->utility, R("0.82"));
  EXPECT_EQ(to_fixed(env[2].response->report.true_harm), "0.012");
  EXPECT_EQ(env[1].response->report.true_harm, 0);
  EXPECT_EQ(env[1].response->utility, R("0.62"));
  EXPECT_THROW(trajectory(cat, fragile_score(cat), {R("0.2"), R("0.1")}), std::invalid_argument);
}

TEST(TrajectoryTest, EnvelopeDominatesFragile) {
  const Catalog cat = deterministic_catalog();
  std::vector<Rational> taus;
  for (int i = 1; i <= 95; ++i) taus.push_back(Rational(i, 100));
  const auto frag = trajectory(cat, fragile_score(cat), taus);
  const auto env = trajectory(cat, envelope_lift(cat), taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!frag[i].response || !env[i].response) continue;
    const Rational hf = frag[i].response->report.true_harm, he = env[i].response->report.true_harm;
    EXPECT_LE(he, hf) << to_fixed(taus[i]);
    // Equal harm only at 0 or where the envelope budget admits the whole class.
    if (he == hf) EXPECT_TRUE(he == 0 || taus[i] >= R("0.95")) << to_fixed(taus[i]);
  }
}

TEST(SolveOracleTest, MatchesVertexEnumerationLp) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const Catalog cat = testing::random_catalog(rng, {1, 7});
    const ScoreKind kind = static_cast<ScoreKind>(testing::draw_int(rng, 0, 2));
    const Rational tau = testing::draw_unit(rng);
    const BudgetedLP lp = make_lp(cat, kind, tau);
    const auto br = solve(cat, lp);
    const auto oracle = testing::lp_vertex_oracle(lp.scores.values, lp.utilities, tau);
    ASSERT_EQ(br.has_value(), oracle.has_value());
    if (!br) continue;
    EXPECT_EQ(br->utility, *oracle);
    EXPECT_LE(br->measured, tau);
    EXPECT_LE(br->support.size(), 2u);
    EXPECT_TRUE(is_distribution(br->strategy));
  }
}

TEST(SolveOracleTest, UtilityNondecreasingInBudget) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const Catalog cat = testing::random_catalog(rng);
    std::optional<Rational> last;
    for (int t = 0; t <= 20; ++t) {
      const auto br = solve(cat, make_lp(cat, ScoreKind::kFragile, Rational(t, 20)));
      if (!br) {
        EXPECT_FALSE(last.has_value());
        continue;
      }
      if (last) EXPECT_GE(br->utility, *last);
      last = br->utility;
    }
  }
}

}  // namespace
}  // namespace semaudit
