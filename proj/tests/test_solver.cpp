#include "semaudit/solver.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "semaudit/catalogs.hpp"
#include "semaudit/io.hpp"

namespace semaudit {
namespace {

namespace fs = std::filesystem;

// Throwaway shell scripts standing in for a solver binary.
class FakeSolverTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("semaudit_fake_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    script_ = dir_ / "query.smt2";
    write_file(script_, "(check-sat)\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  SolverConfig fake(const std::string& body) {
    const fs::path exe = dir_ / "solver.sh";
    write_file(exe, "#!/bin/sh\n" + body + "\n");
    fs::permissions(exe, fs::perms::owner_all);
    return {"fake", exe};
  }

  fs::path dir_;
  fs::path script_;
};

TEST_F(FakeSolverTest, Sat) {
  const SolverRun run = run_external_solver(fake("echo sat"), script_);
  EXPECT_EQ(run.verdict, Verdict::kSat);
  EXPECT_EQ(run.solver, "fake");
}

TEST_F(FakeSolverTest, UnsatAfterBlankLines) {
  EXPECT_EQ(run_external_solver(fake("echo; echo '  unsat  '"), script_).verdict, Verdict::kUnsat);
}

TEST_F(FakeSolverTest, UnknownVerdict) {
  EXPECT_EQ(run_external_solver(fake("echo unknown"), script_).verdict, Verdict::kUnknown);
}

TEST_F(FakeSolverTest, GarbageIsUnknownOutputWithCapture) {
  const SolverRun run = run_external_solver(fake("echo 'segmentation fault: core dumped'"), script_);
  EXPECT_EQ(run.verdict, Verdict::kUnknownOutput);
  EXPECT_NE(run.raw_output.find("segmentation fault"), std::string::npos);
}

TEST_F(FakeSolverTest, ErrorLine) {
  const SolverRun run = run_external_solver(fake("echo '(error \"bad\")'; exit 1"), script_);
  EXPECT_NE(run.verdict, Verdict::kSat);
  EXPECT_NE(run.verdict, Verdict::kUnsat);
  EXPECT_FALSE(run.raw_output.empty());
}

TEST_F(FakeSolverTest, SleepingSolverTimesOut) {
  const SolverRun run = run_external_solver(fake("sleep 30; echo sat"), script_, std::chrono::milliseconds(300));
  EXPECT_EQ(run.verdict, Verdict::kTimeout);
  EXPECT_LT(run.elapsed_seconds, 5.0);
}

TEST_F(FakeSolverTest, ReceivesScriptPath) {
  const SolverRun run = run_external_solver(fake("test -f \"$1\" && echo sat || echo unsat"), script_);
  EXPECT_EQ(run.verdict, Verdict::kSat);
}

TEST_F(FakeSolverTest, QueryOverloadWritesTempFile) {
  const SmtQuery q = emit_smt(six_variant_catalog(), SmtProperty::kCertification, Rational(17, 20));
  const SolverRun run = run_external_solver(fake("grep -q check-sat \"$1\" && echo unsat"), q);
  EXPECT_EQ(run.verdict, Verdict::kUnsat);
}

TEST(SolverRunnerTest, MissingExecutableIsUnavailable) {
  const SolverRun run = run_external_solver({"ghost", "/nonexistent/solver"}, fs::path("/dev/null"));
  EXPECT_EQ(run.verdict, Verdict::kUnavailable);
  EXPECT_EQ(to_string(run.verdict), "external solver unavailable");
}

TEST(SolverRunnerTest, ParseOutput) {
  EXPECT_EQ(parse_solver_output("sat\n"), Verdict::kSat);
  EXPECT_EQ(parse_solver_output("\n\nunsat\nsat\n"), Verdict::kUnsat);
  EXPECT_EQ(parse_solver_output("timeout\n"), Verdict::kTimeout);
  EXPECT_EQ(parse_solver_output(""), Verdict::kUnknownOutput);
  EXPECT_EQ(parse_solver_output("saturday"), Verdict::kUnknownOutput);
}

TEST(SolverRunnerTest, CommandLines) {
  const auto z3 = solver_command({"z3", "/bin/z3"}, "q.smt2", std::chrono::seconds(10));
  EXPECT_EQ(z3, (std::vector<std::string>{"/bin/z3", "-smt2", "-T:10", "smt.random_seed=0", "q.smt2"}));
  const auto cvc5 = solver_command({"cvc5", "/bin/cvc5"}, "q.smt2", std::chrono::seconds(10));
  EXPECT_EQ(cvc5, (std::vector<std::string>{"/bin/cvc5", "--lang=smt2", "--tlimit=10000", "--seed=0", "q.smt2"}));
  EXPECT_EQ(solver_command({"other", "/bin/x"}, "q.smt2", std::chrono::seconds(1)),
            (std::vector<std::string>{"/bin/x", "q.smt2"}));
}

TEST(SolverRunnerTest, SpecsAndDiscovery) {
  const SolverConfig s = parse_solver_spec("mine=/opt/solver");
  EXPECT_EQ(s.name, "mine");
  EXPECT_EQ(s.executable, "/opt/solver");
  EXPECT_THROW(parse_solver_spec("=/x"), std::invalid_argument);

  ::setenv("SEMAUDIT_SOLVERS", "envsolver=/env/path", 1);
  const auto found = discover_solvers({"other=/cli/path", "envsolver=/override"});
  ::unsetenv("SEMAUDIT_SOLVERS");
  auto named = [&](const std::string& n) -> const SolverConfig* {
    for (const auto& f : found) {
      if (f.name == n) return &f;
    }
    return nullptr;
  };
  ASSERT_NE(named("envsolver"), nullptr);
  EXPECT_EQ(named("envsolver")->executable, "/override");
  ASSERT_NE(named("other"), nullptr);
}

}  // namespace
}  // namespace semaudit
