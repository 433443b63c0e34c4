#include "semaudit/experiments.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <unistd.h>

#include "semaudit/io.hpp"

namespace semaudit {
namespace {

namespace fs = std::filesystem;

// Compares against tests/golden/<name>.json; SEMAUDIT_UPDATE_GOLDEN=1 rewrites it.
void expect_golden(const std::string& name, const ExperimentResult& result) {
  const fs::path path = fs::path(SEMAUDIT_GOLDEN_DIR) / (name + ".json");
  const std::string actual = to_json(result);
  if (const char* update = std::getenv("SEMAUDIT_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    write_file(path, actual);
    return;
  }
  ASSERT_TRUE(fs::exists(path)) << "missing golden file " << path;
  EXPECT_EQ(actual, read_file(path)) << "golden mismatch for " << name;
}

void expect_all_checks_pass(const ExperimentResult& r) {
  for (const Check& c : r.checks) {
    EXPECT_TRUE(c.passed) << r.id << ": " << c.name << " observed " << c.observed << " expected " << c.expected;
  }
}

RandomConfig small_random(int threads) {
  RandomConfig cfg;
  cfg.instances = 25;
  cfg.threads = threads;
  return cfg;
}

FormalConfig emit_only() {
  FormalConfig cfg;
  cfg.scalability = false;
  return cfg;
}

struct GoldenCase {
  std::string name;
  std::function<ExperimentResult()> run;
};

void PrintTo(const GoldenCase& c, std::ostream* os) { *os << c.name; }

class GoldenTest : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(GoldenTest, MatchesStoredOutputAndPasses) {
  const ExperimentResult r = GetParam().run();
  expect_golden(GetParam().name, r);
  // Reduced-size runs carry reference checks only for the full configuration.
  expect_all_checks_pass(r);
}

TEST_P(GoldenTest, RepeatedRunsAreIdentical) {
  EXPECT_EQ(to_json(GetParam().run()), to_json(GetParam().run()));
}

INSTANTIATE_TEST_SUITE_P(
    Experiments, GoldenTest,
    ::testing::Values(GoldenCase{"deterministic", [] { return run_deterministic(); }},
                      GoldenCase{"hatecheck", [] { return run_hatecheck(); }},
                      GoldenCase{"protocol_sensitivity", [] { return run_protocol_sensitivity(); }},
                      GoldenCase{"sensitivity_sweep", [] { return run_sensitivity_sweep(); }},
                      GoldenCase{"grid", [] { return run_grid(20, Rational(7, 10), 2); }},
                      GoldenCase{"mdp", [] { return run_mdp(); }},
                      GoldenCase{"random_25", [] { return run_random(small_random(1)); }},
                      GoldenCase{"smt_emit_only", [] { return run_smt(emit_only()); }}),
    [](const ::testing::TestParamInfo<GoldenCase>& info) { return info.param.name; });

TEST(RandomExperimentTest, ThreadCountDoesNotChangeOutput) {
  const std::string one = to_json(run_random(small_random(1)));
  EXPECT_EQ(to_json(run_random(small_random(4))), one);
  EXPECT_EQ(to_json(run_random(small_random(0))), one);
}

TEST(RandomExperimentTest, SeedChangesInputDigest) {
  RandomConfig a = small_random(1), b = small_random(1);
  b.seed += 1;
  EXPECT_NE(run_random(a).input_digest, run_random(b).input_digest);
}

TEST(ProtocolSensitivityTest, IdenticalPartitionsGiveIdenticalRows) {
  // 0.96 and 0.99 both drop every edge.
  const ExperimentResult r = run_protocol_sensitivity({Rational(96, 100), Rational(99, 100)});
  const Table& t = r.table("thresholds");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(std::vector<std::string>(t.rows[0].begin() + 1, t.rows[0].end()),
            std::vector<std::string>(t.rows[1].begin() + 1, t.rows[1].end()));
}

TEST(SmtExperimentTest, NoSolversMeansEmitOnlyNotPass) {
  const ExperimentResult r = run_smt(emit_only());
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.metadata.at("solvers"), "none configured");
  // 5 catalogs × 3 properties.
  EXPECT_EQ(r.table("queries").rows.size(), 15u);
  EXPECT_EQ(r.find_check("z3 returns the expected verdicts"), nullptr);
}

TEST(SmtExperimentTest, BrokenSolverFailsTheSuite) {
  FormalConfig cfg = emit_only();
  const fs::path exe = fs::temp_directory_path() / ("semaudit_liar_" + std::to_string(::getpid()) + ".sh");
  write_file(exe, "#!/bin/sh\necho sat\n");
  fs::permissions(exe, fs::perms::owner_all);
  cfg.solvers = {{"liar", exe}};
  const ExperimentResult r = run_smt(cfg);
  fs::remove(exe);
  EXPECT_FALSE(r.passed());
}

TEST(WriteResultTest, CsvAndJsonLayouts) {
  const fs::path dir = fs::temp_directory_path() / ("semaudit_out_" + std::to_string(::getpid()));
  const ExperimentResult r = run_mdp();
  write_result(r, dir, OutputFormat::kCsv);
  write_result(r, dir, OutputFormat::kJson);
  write_summary({r}, dir, OutputFormat::kCsv, {{"command", "test"}});
  EXPECT_TRUE(fs::exists(dir / "mdp" / "values.csv"));
  EXPECT_TRUE(fs::exists(dir / "mdp" / "checks.csv"));
  EXPECT_TRUE(fs::exists(dir / "mdp.json"));
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  bool prism = false;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "artifacts")) {
    prism = prism || entry.path().extension() == ".prism";
  }
  EXPECT_TRUE(prism);
  EXPECT_NE(read_file(dir / "manifest.json").find(r.input_digest), std::string::npos);
  fs::remove_all(dir);
}

TEST(CheckBuildersTest, Semantics) {
  EXPECT_TRUE(check_3dp("a", Rational(4, 17), "0.235").passed);
  EXPECT_FALSE(check_3dp("a", Rational(4, 17), "0.236").passed);
  EXPECT_TRUE(check_exact("b", Rational(1, 3), Rational(2, 6)).passed);
  EXPECT_TRUE(check_within("c", Rational(1, 2), 0, 1).passed);
  EXPECT_FALSE(check_within("c", Rational(3, 2), 0, 1).passed);
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

}  // namespace
}  // namespace semaudit
