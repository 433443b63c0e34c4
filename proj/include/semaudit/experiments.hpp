#ifndef SEMAUDIT_EXPERIMENTS_HPP_
#define SEMAUDIT_EXPERIMENTS_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "semaudit/mdp.hpp"
#include "semaudit/rational.hpp"
#include "semaudit/solver.hpp"

namespace semaudit {

inline constexpr const char* kVersion = "0.1.0";

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// One comparison of an observed value against a reference.
struct Check {
  std::string name;
  std::string expected;
  std::string observed;
  std::string tolerance;  // "3dp" for a 3-decimal match, "exact", "[lo, hi]", ...
  bool passed = false;
};

struct ExperimentResult {
  std::string id;
  std::string input_digest;                      // SHA-256 over the serialized inputs
  std::map<std::string, std::string> metadata;   // seed, budget, generator, ...
  std::vector<Table> tables;
  std::vector<Check> checks;
  std::map<std::string, std::string> artifacts;  // relative path -> file contents
  // Wall-clock timings in seconds; reported but kept out of the digest and
  // of the reproducible outputs.
  std::map<std::string, double> timings;

  bool passed() const;
  const Table& table(const std::string& name) const;
  const Check* find_check(const std::string& name) const;
};

// Check builders. 3dp compares round-half-even renderings.
Check check_3dp(const std::string& name, const Rational& observed, const std::string& expected);
Check check_exact(const std::string& name, const Rational& observed, const Rational& expected);
Check check_within(const std::string& name, const Rational& observed, const Rational& lo, const Rational& hi);
Check check_true(const std::string& name, bool condition, const std::string& expected = "true",
                 const std::string& observed = {});

std::string sha256_hex(const std::string& data);

struct RandomConfig {
  int instances = 500;
  Rational tau{1, 5};
  std::uint64_t seed = 20240501;
  int threads = 0;  // 0: hardware concurrency
};

struct FormalConfig {
  std::vector<SolverConfig> solvers;
  std::chrono::milliseconds timeout{10'000};
  long grid_denominator = 20;
  std::uint64_t seed = 7;  // generator seed of the emitted random catalogs
  bool scalability = true;  // also emit the 205/505/1005-variant triplet
  AuditMdp mdp;
};

// Deterministic catalog: budgeted best responses, the three-repair
// comparison, trajectories over τ = 0.05..0.95 and ε-strict certificates.
ExperimentResult run_deterministic();

// Random catalogs: per-instance best responses under all three metrics and
// the gap, coverage and utility aggregates.
ExperimentResult run_random(const RandomConfig& cfg = {});

// HateCheck-derived instance at the given budget.
ExperimentResult run_hatecheck(const Rational& tau = Rational(1, 5));

// Six-variant model under the given validation thresholds.
ExperimentResult run_protocol_sensitivity(const std::vector<Rational>& thresholds = {Rational(7, 10),
                                                                                     Rational(9, 10)},
                                          long grid_denominator = 20);

// Certified ceiling over α̂ ∈ [0.20, 1.00] × η̄ ∈ {0, .05, .10, .15, .20}.
ExperimentResult run_sensitivity_sweep(const Rational& tau = Rational(1, 5));

// Exhaustive grid verification of certificate violations and invariance on
// any valid catalog with harmful classes.
ExperimentResult run_grid_on(const Catalog& catalog, long grid_denominator = 20, int threads = 1);

// The same on the six-variant model at threshold ρ.
ExperimentResult run_grid(long grid_denominator = 20, const Rational& rho = Rational(7, 10), int threads = 1);

// SMT emission, round trips and external solver runs.
ExperimentResult run_smt(const FormalConfig& cfg);

// MDP values by enumeration and by explicit state exploration, plus the
// PRISM model and property files.
ExperimentResult run_mdp(const AuditMdp& mdp = {});

// run_smt and run_mdp under one result.
ExperimentResult run_formal(const FormalConfig& cfg);

enum class OutputFormat { kCsv, kJson };

// Writes tables, checks and artifacts below out_dir. CSV gives one file per
// table under "<id>/"; JSON gives "<id>.json". Artifacts always land under
// "artifacts/".
void write_result(const ExperimentResult& result, const std::filesystem::path& out_dir, OutputFormat format);

// Summary verdict file and a manifest of inputs, digests and versions.
void write_summary(const std::vector<ExperimentResult>& results, const std::filesystem::path& out_dir,
                   OutputFormat format, const std::map<std::string, std::string>& invocation);

std::string to_json(const ExperimentResult& result, bool include_timings = false);
std::string to_csv(const Table& table);

}  // namespace semaudit

#endif  // SEMAUDIT_EXPERIMENTS_HPP_
