#include "semaudit/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace semaudit {

namespace fs = std::filesystem;

namespace {

bool is_executable_file(const fs::path& p) {
  std::error_code ec;
  return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<fs::path> find_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) {
    if (is_executable_file(name)) return fs::path(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (path == nullptr) return std::nullopt;
  for (const auto& dir : split(path, ':')) {
    const fs::path candidate = fs::path(dir) / name;
    if (is_executable_file(candidate)) return candidate;
  }
  return std::nullopt;
}

SolverConfig parse_solver_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    auto found = find_executable(spec);
    return {spec, found ? *found : fs::path(spec)};
  }
  SolverConfig out{trim(spec.substr(0, eq)), fs::path(trim(spec.substr(eq + 1)))};
  if (out.name.empty() || out.executable.empty()) throw std::invalid_argument("bad solver spec '" + spec + "'");
  return out;
}

std::vector<SolverConfig> discover_solvers(const std::vector<std::string>& overrides) {
  std::map<std::string, fs::path> chosen;
  std::vector<std::string> order;
  auto put = [&](const SolverConfig& s) {
    if (!chosen.count(s.name)) order.push_back(s.name);
    chosen[s.name] = s.executable;
  };
  for (const char* name : {"z3", "cvc5"}) {
    if (auto p = find_executable(name)) put({name, *p});
  }
  if (const char* env = std::getenv("SEMAUDIT_SOLVERS")) {
    for (const auto& item : split(env, ',')) put(parse_solver_spec(item));
  }
  for (const auto& item : overrides) put(parse_solver_spec(item));
  std::vector<SolverConfig> out;
  for (const auto& name : order) out.push_back({name, chosen[name]});
  return out;
}

std::vector<std::string> solver_command(const SolverConfig& solver, const fs::path& script,
                                        std::chrono::milliseconds timeout) {
  const std::string exe = solver.executable.string();
  const std::string stem = solver.executable.filename().string();
  const long secs = std::max<long>(1, static_cast<long>((timeout.count() + 999) / 1000));
  if (solver.name == "z3" || stem == "z3") {
    return {exe, "-smt2", "-T:" + std::to_string(secs), "smt.random_seed=0", script.string()};
  }
  if (solver.name == "cvc5" || stem == "cvc5") {
    return {exe, "--lang=smt2", "--tlimit=" + std::to_string(timeout.count()), "--seed=0", script.string()};
  }
  return {exe, script.string()};
}

Verdict parse_solver_output(const std::string& output) {
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "sat") return Verdict::kSat;
    if (line == "unsat") return Verdict::kUnsat;
    if (line == "unknown") return Verdict::kUnknown;
    if (line == "timeout") return Verdict::kTimeout;
    return Verdict::kUnknownOutput;
  }
  return Verdict::kUnknownOutput;
}

SolverRun run_external_solver(const SolverConfig& solver, const fs::path& script_path,
                              std::chrono::milliseconds timeout) {
  SolverRun run;
  run.solver = solver.name;
  if (!is_executable_file(solver.executable)) {
    run.verdict = Verdict::kUnavailable;
    run.raw_output = "external solver unavailable: " + solver.executable.string();
    return run;
  }
  const std::vector<std::string> args = solver_command(solver, script_path, timeout);
  std::vector<char*> argv;
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  int pipefd[2];
  if (::pipe(pipefd) != 0) {
    run.verdict = Verdict::kError;
    run.raw_output = "pipe failed";
    return run;
  }
  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    run.verdict = Verdict::kError;
    run.raw_output = "fork failed";
    return run;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(pipefd[1], STDOUT_FILENO);
    ::dup2(pipefd[1], STDERR_FILENO);
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(pipefd[1]);
  const auto deadline = start + timeout;
  bool timed_out = false;
  char buf[4096];
  while (true) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{pipefd[0], POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 100)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (ready == 0) continue;
    const ssize_t got = ::read(pipefd[0], buf, sizeof buf);
    if (got <= 0) break;
    run.raw_output.append(buf, static_cast<std::size_t>(got));
  }
  if (timed_out) {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
  }
  ::close(pipefd[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  run.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (timed_out) {
    run.verdict = Verdict::kTimeout;
    return run;
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && run.raw_output.empty()) {
    run.verdict = Verdict::kUnavailable;
    run.raw_output = "external solver unavailable: exec failed";
    return run;
  }
  run.verdict = parse_solver_output(run.raw_output);
  return run;
}

SolverRun run_external_solver(const SolverConfig& solver, const SmtQuery& query,
                              std::chrono::milliseconds timeout) {
  static std::atomic<long> counter{0};
  const fs::path file = fs::temp_directory_path() /
                        ("semaudit-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
                         query.name + ".smt2");
  {
    std::ofstream out(file);
    out << query.text;
  }
  SolverRun run = run_external_solver(solver, file, timeout);
  std::error_code ec;
  fs::remove(file, ec);
  return run;
}

}  // namespace semaudit
