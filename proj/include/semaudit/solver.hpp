#ifndef SEMAUDIT_SOLVER_HPP_
#define SEMAUDIT_SOLVER_HPP_

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semaudit/smt.hpp"

namespace semaudit {

struct SolverConfig {
  std::string name;  // "z3", "cvc5" or anything else speaking SMT-LIB2 on a file argument
  std::filesystem::path executable;
};

struct SolverRun {
  std::string solver;
  Verdict verdict = Verdict::kUnavailable;
  double elapsed_seconds = 0.0;
  std::string raw_output;  // kept for unknown-output and error runs
};

// Looks `name` up as an explicit path first, then on PATH.
std::optional<std::filesystem::path> find_executable(const std::string& name);

// Solvers named in SEMAUDIT_SOLVERS ("z3=/path,cvc5=/path"), overrides of the
// same form, and otherwise z3 and cvc5 when they are on PATH. Overrides win.
std::vector<SolverConfig> discover_solvers(const std::vector<std::string>& overrides = {});

// Parses "name=path" (or a bare name looked up on PATH).
SolverConfig parse_solver_spec(const std::string& spec);

// Command line for a solver given the script file. Known solvers get a fixed
// seed and their native time limit; unknown ones get just the file.
std::vector<std::string> solver_command(const SolverConfig& solver, const std::filesystem::path& script,
                                        std::chrono::milliseconds timeout);

// First line of output mapped to a verdict.
Verdict parse_solver_output(const std::string& output);

// Runs the solver on `script_path`, killing it after `timeout`. A missing
// executable yields kUnavailable and never a verdict.
SolverRun run_external_solver(const SolverConfig& solver, const std::filesystem::path& script_path,
                              std::chrono::milliseconds timeout = std::chrono::seconds(10));

// Writes the query text to a temporary file first.
SolverRun run_external_solver(const SolverConfig& solver, const SmtQuery& query,
                              std::chrono::milliseconds timeout = std::chrono::seconds(10));

}  // namespace semaudit

#endif  // SEMAUDIT_SOLVER_HPP_
