// Command-line driver for the audit experiments.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semaudit/catalogs.hpp"
#include "semaudit/experiments.hpp"
#include "semaudit/io.hpp"

using namespace semaudit;

namespace {

struct Options {
  std::string tau = "0.20";
  std::vector<std::string> rho{"0.70", "0.90"};
  std::uint64_t seed = RandomConfig{}.seed;
  std::uint64_t smt_seed = FormalConfig{}.seed;
  int instances = 500;
  long grid_step = 20;
  int threads = 0;
  std::string out_dir = "results";
  std::string format = "csv";
  std::vector<std::string> solvers;
  double timeout = 10.0;
  bool no_scalability = false;
  std::string catalog;
  std::string classes;
  std::string edges;
};

void print(const ExperimentResult& r) {
  for (const auto& c : r.checks) {
    std::cout << (c.passed ? "  ok    " : "  FAIL  ") << c.name << ": " << c.observed;
    if (!c.passed) std::cout << " (expected " << c.expected << ")";
    std::cout << "\n";
  }
  std::cout << r.id << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
}

// A user catalog from --catalog/--classes, optionally re-partitioned by
// --edges at the first --rho value.
Catalog user_catalog(const Options& o) {
  Catalog cat = read_catalog(read_file(o.catalog), o.classes.empty() ? std::string() : read_file(o.classes));
  if (!o.edges.empty()) {
    ProtocolSpec spec{read_edges(read_file(o.edges)), parse_rational(o.rho.front())};
    std::vector<std::string> ids;
    for (const auto& v : cat.variants()) ids.push_back(v.id);
    RelabeledCatalog rc = apply_partition(cat, induce_partition(spec, ids));
    for (const auto& note : rc.label_notes) std::cerr << "note: " << note << "\n";
    cat = std::move(rc.catalog);
  }
  return cat;
}

FormalConfig formal_config(const Options& o) {
  FormalConfig cfg;
  cfg.solvers = discover_solvers(o.solvers);
  cfg.timeout = std::chrono::milliseconds(static_cast<long>(o.timeout * 1000));
  cfg.seed = o.smt_seed;
  cfg.scalability = !o.no_scalability;
  cfg.mdp.budget = parse_rational(o.tau);
  cfg.mdp.grid_denominator = o.grid_step;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Manipulation-robust audit metrics: experiments and verification artifacts"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);
  Options o;

  app.add_option("--out-dir", o.out_dir, "Directory for tables, artifacts and the manifest")->capture_default_str();
  app.add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)");

  auto* det = app.add_subcommand("deterministic", "Best responses, repairs, trajectories and certificates");
  auto* rnd = app.add_subcommand("random", "Random-catalog stress test");
  rnd->add_option("--instances", o.instances, "Number of catalogs")->check(CLI::PositiveNumber)->capture_default_str();
  rnd->add_option("--seed", o.seed, "Base seed; instance i uses seed+i")->capture_default_str();
  rnd->add_option("--tau", o.tau, "Audit budget")->capture_default_str();
  auto* hc = app.add_subcommand("hatecheck", "HateCheck-derived instance");
  hc->add_option("--tau", o.tau, "Audit budget")->capture_default_str();
  auto* prot = app.add_subcommand("protocol-sensitivity", "Six-variant model under several thresholds");
  prot->add_option("--rho", o.rho, "Validation thresholds")->capture_default_str();
  prot->add_option("--grid-step", o.grid_step, "Grid denominator k (step 1/k)")->capture_default_str();
  auto* sweep = app.add_subcommand("sweep", "Certified ceiling over coverage and slack");
  sweep->add_option("--tau", o.tau, "Audit budget")->capture_default_str();
  auto* grid = app.add_subcommand("grid", "Exhaustive grid verification");
  grid->add_option("--grid-step", o.grid_step, "Grid denominator k (step 1/k)")->capture_default_str();
  grid->add_option("--rho", o.rho, "Validation threshold (first value used)")->capture_default_str();
  grid->add_option("--catalog", o.catalog, "Variant table CSV instead of the six-variant model")->check(CLI::ExistingFile);
  grid->add_option("--classes", o.classes, "Class table CSV")->check(CLI::ExistingFile);
  grid->add_option("--edges", o.edges, "Protocol edge table CSV, thresholded at --rho")->check(CLI::ExistingFile);
  auto* smt = app.add_subcommand("smt", "Emit SMT-LIB2 queries and run external solvers");
  auto* mdp = app.add_subcommand("mdp", "Bounded audit MDP and PRISM model");
  mdp->add_option("--tau", o.tau, "Audit budget")->capture_default_str();
  mdp->add_option("--grid-step", o.grid_step, "Mass grid denominator")->capture_default_str();
  auto* all = app.add_subcommand("all", "Every experiment");
  for (auto* sub : {smt, all}) {
    sub->add_option("--solver", o.solvers, "Solver as name=path (repeatable)");
    sub->add_option("--timeout", o.timeout, "Per-query timeout in seconds")->capture_default_str();
    sub->add_option("--smt-seed", o.smt_seed, "Generator seed of the emitted random catalogs")->capture_default_str();
    sub->add_flag("--no-scalability", o.no_scalability, "Skip the 205/505/1005-variant queries");
  }
  all->add_option("--seed", o.seed, "Base seed of the random-catalog experiment")->capture_default_str();
  all->add_option("--instances", o.instances, "Number of random catalogs")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const OutputFormat format = o.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
    std::vector<ExperimentResult> results;
    auto random_cfg = [&] {
      RandomConfig cfg;
      cfg.instances = o.instances;
      cfg.seed = o.seed;
      cfg.tau = parse_rational(o.tau);
      cfg.threads = o.threads;
      return cfg;
    };
    std::vector<Rational> rhos;
    for (const auto& r : o.rho) rhos.push_back(parse_rational(r));

    if (*det) results.push_back(run_deterministic());
    if (*rnd) results.push_back(run_random(random_cfg()));
    if (*hc) results.push_back(run_hatecheck(parse_rational(o.tau)));
    if (*prot) results.push_back(run_protocol_sensitivity(rhos, o.grid_step));
    if (*sweep) results.push_back(run_sensitivity_sweep(parse_rational(o.tau)));
    if (*grid) {
      results.push_back(o.catalog.empty() ? run_grid(o.grid_step, rhos.front(), o.threads)
                                          : run_grid_on(user_catalog(o), o.grid_step, o.threads));
    }
    if (*smt) results.push_back(run_smt(formal_config(o)));
    if (*mdp) {
      AuditMdp m;
      m.budget = parse_rational(o.tau);
      m.grid_denominator = o.grid_step;
      results.push_back(run_mdp(m));
    }
    if (*all) {
      results.push_back(run_deterministic());
      results.push_back(run_random(random_cfg()));
      results.push_back(run_hatecheck());
      results.push_back(run_protocol_sensitivity());
      results.push_back(run_sensitivity_sweep());
      results.push_back(run_grid(20, Rational(7, 10), o.threads));
      FormalConfig f = formal_config(o);
      f.mdp = AuditMdp{};
      results.push_back(run_formal(f));
    }

    bool ok = true;
    for (const auto& r : results) {
      print(r);
      write_result(r, o.out_dir, format);
      ok = ok && r.passed();
    }
    std::map<std::string, std::string> invocation;
    std::string cmd;
    for (int i = 0; i < argc; ++i) cmd += (i ? " " : "") + std::string(argv[i]);
    invocation["command"] = cmd;
    write_summary(results, o.out_dir, format, invocation);
    std::cout << "outputs written to " << o.out_dir << "\n";
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
