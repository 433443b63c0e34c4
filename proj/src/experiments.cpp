#include "semaudit/experiments.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <future>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "semaudit/best_response.hpp"
#include "semaudit/catalogs.hpp"
#include "semaudit/certify.hpp"
#include "semaudit/generator.hpp"
#include "semaudit/grid.hpp"
#include "semaudit/io.hpp"
#include "semaudit/smt.hpp"

namespace semaudit {

// ---------------------------------------------------------------------------
// Result plumbing

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Table& ExperimentResult::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("no table " + name + " in " + id);
}

const Check* ExperimentResult::find_check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Check check_3dp(const std::string& name, const Rational& observed, const std::string& expected) {
  const std::string got = to_fixed(observed, 3);
  return {name, expected, got + " (" + to_exact_string(observed) + ")", "3dp", got == expected};
}

Check check_exact(const std::string& name, const Rational& observed, const Rational& expected) {
  return {name, to_exact_string(expected), to_exact_string(observed), "exact", observed == expected};
}

Check check_within(const std::string& name, const Rational& observed, const Rational& lo, const Rational& hi) {
  return {name, "[" + to_fixed(lo, 3) + ", " + to_fixed(hi, 3) + "]", to_fixed(observed, 4), "band",
          lo <= observed && observed <= hi};
}

Check check_true(const std::string& name, bool condition, const std::string& expected, const std::string& observed) {
  return {name, expected, observed.empty() ? (condition ? "true" : "false") : observed, "exact", condition};
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string catalog_digest_input(const Catalog& catalog) {
  return write_variants_csv(catalog) + write_classes_csv(catalog);
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string render_strategy(const Catalog& catalog, const Strategy& x) {
  std::vector<std::string> parts;
  for (Eigen::Index v = 0; v < x.size(); ++v) {
    if (x[v] != 0) parts.push_back(catalog.variants()[v].id + ":" + to_exact_string(x[v]));
  }
  return join(parts, " ");
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
}

Rational dec(const char* text) { return parse_rational(text); }

std::string tau_label(const Rational& tau) { return to_fixed(tau, 2); }

}  // namespace

// ---------------------------------------------------------------------------
// Deterministic catalog

ExperimentResult run_deterministic() {
  const Catalog cat = deterministic_catalog();
  ExperimentResult r;
  r.id = "deterministic";
  r.input_digest = sha256_hex(r.id + "\n" + catalog_digest_input(cat));
  r.metadata["catalog"] = "deterministic (4 benign singletons, 3 harm-pure orig/manip classes)";
  r.metadata["tie_break"] = "utility, then lower true harm, then smaller support";

  // Budgeted best responses.
  auto start = Clock::now();
  struct Row {
    ScoreKind kind;
    const char* tau;
    const char* utility;
    const char* harm;
    const char* measured;
  };
  const std::vector<Row> published{
      {ScoreKind::kFragile, "0.10", "0.760", "1.000", "0.100"},
      {ScoreKind::kEnvelope, "0.10", "0.620", "0.000", "0.100"},
      {ScoreKind::kFragile, "0.15", "0.820", "1.000", "0.150"},
      {ScoreKind::kEnvelope, "0.15", "0.662", "0.012", "0.150"},
      {ScoreKind::kFragile, "0.20", "0.820", "1.000", "0.150"},
      {ScoreKind::kEnvelope, "0.20", "0.672", "0.074", "0.200"},
  };
  Table best{"best_responses",
             {"metric", "tau", "utility", "true_harm", "measured", "utility_exact", "true_harm_exact",
              "measured_exact", "strategy", "tied_candidates"},
             {}};
  for (const Row& row : published) {
    const Rational tau = dec(row.tau);
    const auto br = solve(cat, make_lp(cat, row.kind, tau));
    const std::string label = std::string(to_string(row.kind)) + "@" + row.tau;
    if (!br) {
      r.checks.push_back(check_true(label + " feasible", false));
      continue;
    }
    best.rows.push_back({std::string(to_string(row.kind)), row.tau, to_fixed(br->utility), to_fixed(br->report.true_harm),
                         to_fixed(br->measured), to_exact_string(br->utility), to_exact_string(br->report.true_harm),
                         to_exact_string(br->measured), render_strategy(cat, br->strategy),
                         std::to_string(br->tied_candidates)});
    r.checks.push_back(check_3dp(label + " utility", br->utility, row.utility));
    r.checks.push_back(check_3dp(label + " true harm", br->report.true_harm, row.harm));
    r.checks.push_back(check_3dp(label + " measured", br->measured, row.measured));
  }
  r.timings["best_responses"] = seconds_since(start);
  r.tables.push_back(std::move(best));

  // Three repairs at τ = 0.20.
  const Rational tau20 = dec("0.20");
  Table compare{"repair_comparison", {"metric", "utility", "true_harm", "utility_exact", "true_harm_exact"}, {}};
  const std::vector<std::tuple<ScoreKind, const char*, const char*>> repairs{
      {ScoreKind::kFragile, "0.820", "1.000"},
      {ScoreKind::kClassMean, "0.683", "0.146"},
      {ScoreKind::kEnvelope, "0.672", "0.074"},
  };
  for (const auto& [kind, utility, harm] : repairs) {
    const auto br = solve(cat, make_lp(cat, kind, tau20));
    const std::string label = "repair " + std::string(to_string(kind)) + "@0.20";
    compare.rows.push_back({std::string(to_string(kind)), to_fixed(br->utility), to_fixed(br->report.true_harm),
                            to_exact_string(br->utility), to_exact_string(br->report.true_harm)});
    r.checks.push_back(check_3dp(label + " utility", br->utility, utility));
    r.checks.push_back(check_3dp(label + " true harm", br->report.true_harm, harm));
  }
  r.tables.push_back(std::move(compare));

  // Trajectories over τ = 0.05, 0.10, ..., 0.95.
  start = Clock::now();
  std::vector<Rational> taus;
  for (int k = 1; k <= 19; ++k) taus.emplace_back(k, 20);
  Table traj{"trajectory",
             {"metric", "tau", "feasible", "utility", "true_harm", "measured", "utility_exact", "true_harm_exact"},
             {}};
  std::map<ScoreKind, std::vector<TrajectoryPoint<Rational>>> paths;
  for (ScoreKind kind : {ScoreKind::kFragile, ScoreKind::kEnvelope, ScoreKind::kClassMean}) {
    paths[kind] = trajectory(cat, make_score(cat, kind), taus);
    for (const auto& p : paths[kind]) {
      if (p.response) {
        traj.rows.push_back({std::string(to_string(kind)), tau_label(p.tau), "1", to_fixed(p.response->utility),
                             to_fixed(p.response->report.true_harm), to_fixed(p.response->measured),
                             to_exact_string(p.response->utility), to_exact_string(p.response->report.true_harm)});
      } else {
        traj.rows.push_back({std::string(to_string(kind)), tau_label(p.tau), "0", "", "", "", "", ""});
      }
    }
  }
  r.timings["trajectory"] = seconds_since(start);
  r.tables.push_back(std::move(traj));

  auto at = [&](ScoreKind kind, const Rational& tau) -> const BestResponse<Rational>& {
    for (const auto& p : paths.at(kind)) {
      if (p.tau == tau && p.response) return *p.response;
    }
    throw std::logic_error("missing trajectory point");
  };
  bool fragile_saturates = true;
  for (const auto& p : paths[ScoreKind::kFragile]) {
    if (p.tau >= dec("0.10") && (!p.response || p.response->report.true_harm != 1)) fragile_saturates = false;
  }
  r.checks.push_back(check_true("fragile trajectory holds harm 1 from 0.10 on", fragile_saturates));
  r.checks.push_back(check_3dp("envelope trajectory harm@0.15", at(ScoreKind::kEnvelope, dec("0.15")).report.true_harm,
                               "0.012"));
  r.checks.push_back(check_3dp("envelope trajectory harm@0.10", at(ScoreKind::kEnvelope, dec("0.10")).report.true_harm,
                               "0.000"));
  r.checks.push_back(
      check_3dp("envelope trajectory utility@0.10", at(ScoreKind::kEnvelope, dec("0.10")).utility, "0.620"));
  r.checks.push_back(check_3dp("fragile trajectory harm@0.95", at(ScoreKind::kFragile, dec("0.95")).report.true_harm,
                               "1.000"));
  r.checks.push_back(
      check_3dp("fragile trajectory utility@0.95", at(ScoreKind::kFragile, dec("0.95")).utility, "0.820"));

  // Envelope harm never exceeds fragile harm; below τ = 0.95 the two only
  // meet at zero. At 0.95 the envelope optimum itself is all-harmful.
  std::vector<std::string> dominance_failures;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const auto& f = paths[ScoreKind::kFragile][i].response;
    const auto& e = paths[ScoreKind::kEnvelope][i].response;
    if (!f || !e) continue;
    const Rational hf = f->report.true_harm, he = e->report.true_harm;
    const bool ok = taus[i] < dec("0.95") ? (he < hf || (he == 0 && hf == 0)) : he <= hf;
    if (!ok) dominance_failures.push_back(tau_label(taus[i]));
  }
  r.checks.push_back(check_true("envelope harm below fragile harm across budgets", dominance_failures.empty(),
                                "no failing budgets",
                                dominance_failures.empty() ? "none" : join(dominance_failures, " ")));
  bool monotone = true;
  for (const auto& [kind, path] : paths) {
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (path[i - 1].response && path[i].response && path[i].response->utility < path[i - 1].response->utility) {
        monotone = false;
      }
    }
  }
  r.checks.push_back(check_true("optimal utility nondecreasing in budget", monotone));

  // Coverage and ε-strict certificates.
  const CoverageProfile profile = coverage(cat, dec("0.05"));
  Table cov{"coverage", {"class", "alpha", "alpha_exact"}, {}};
  for (std::size_t i = 0; i < profile.class_ids.size(); ++i) {
    cov.rows.push_back({profile.class_ids[i], to_fixed(profile.alpha[i]), to_exact_string(profile.alpha[i])});
  }
  cov.rows.push_back({"global", to_fixed(*profile.global_alpha), to_exact_string(*profile.global_alpha)});
  r.tables.push_back(std::move(cov));
  r.checks.push_back(check_3dp("global coverage", *profile.global_alpha, "0.850"));
  r.checks.push_back(check_exact("envelope certificate ceiling@0.20", make_certificate(profile, tau20, 0).ceiling,
                                 Rational(4, 17)));

  Table strict{"strict_certificates", {"metric", "epsilon", "gamma", "raw_ceiling", "ceiling", "useful", "epsilon_exact",
                                       "raw_ceiling_exact"},
               {}};
  const std::vector<std::tuple<ScoreKind, const char*, const char*, bool>> strict_expect{
      {ScoreKind::kEnvelope, "0.850", "0.235", true},
      {ScoreKind::kFragile, "0.100", "2.000", false},
      {ScoreKind::kClassMean, "0.475", "0.421", true},
  };
  for (const auto& [kind, eps, ceiling, useful] : strict_expect) {
    const Certificate c = strict_certificate(cat, make_score(cat, kind), tau20, 0);
    const std::string label = std::string(to_string(kind)) + " strict certificate";
    strict.rows.push_back({std::string(to_string(kind)), to_fixed(c.epsilon), to_fixed(c.gamma), to_fixed(c.raw_ceiling),
                           to_fixed(c.ceiling), c.useful ? "1" : "0", to_exact_string(c.epsilon),
                           to_exact_string(c.raw_ceiling)});
    r.checks.push_back(check_3dp(label + " epsilon", c.epsilon, eps));
    r.checks.push_back(check_3dp(label + " ceiling", c.raw_ceiling, ceiling));
    r.checks.push_back(check_true(label + " usefulness", c.useful == useful, useful ? "useful" : "vacuous",
                                  c.useful ? "useful" : "vacuous"));
  }
  r.tables.push_back(std::move(strict));
  return r;
}

// ---------------------------------------------------------------------------
// Random catalogs

namespace {

struct InstanceOutcome {
  std::uint64_t seed = 0;
  bool clean = false;
  std::optional<Rational> alpha;
  std::array<std::optional<Rational>, 3> harm;
  std::array<std::optional<Rational>, 3> utility;
  int ties = 0;
};

constexpr std::array<ScoreKind, 3> kAllKinds{ScoreKind::kFragile, ScoreKind::kEnvelope, ScoreKind::kClassMean};

InstanceOutcome run_instance(std::uint64_t seed, const Rational& tau) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  const Catalog cat = sample_catalog(cfg);
  InstanceOutcome out;
  out.seed = seed;
  out.clean = validate_catalog(cat).empty();
  out.alpha = coverage(cat, 0).global_alpha;
  for (std::size_t k = 0; k < kAllKinds.size(); ++k) {
    const auto br = solve(cat, make_lp(cat, kAllKinds[k], tau));
    if (!br) continue;
    out.harm[k] = br->report.true_harm;
    out.utility[k] = br->utility;
    out.ties += br->tied_candidates > 0 ? 1 : 0;
  }
  return out;
}

}  // namespace

ExperimentResult run_random(const RandomConfig& cfg) {
  if (cfg.instances < 1) throw std::invalid_argument("need at least one instance");
  ExperimentResult r;
  r.id = "random";
  std::ostringstream config;
  config << "instances=" << cfg.instances << "\ntau=" << to_exact_string(cfg.tau) << "\nseed=" << cfg.seed
         << "\ngenerator=" << kGeneratorAlgorithm << "\n";
  r.input_digest = sha256_hex(r.id + "\n" + config.str());
  r.metadata["instances"] = std::to_string(cfg.instances);
  r.metadata["tau"] = to_exact_string(cfg.tau);
  r.metadata["seed"] = std::to_string(cfg.seed);
  r.metadata["instance_seed"] = "seed + instance index";
  r.metadata["generator"] = kGeneratorAlgorithm;
  r.metadata["distributions"] =
      "benign score U[0.03,0.15], benign utility U[0.50,0.70], orig score U[0.75,0.95], manip score U[0.05,0.15], "
      "orig utility U[0.70,0.85], manip utility = orig + U[0.02,0.06]";
  r.metadata["note"] =
      "the reference generator is unpublished; aggregates are compared with declared tolerance bands";

  const auto start = Clock::now();
  std::vector<InstanceOutcome> outcomes(static_cast<std::size_t>(cfg.instances));
  const int workers = worker_count(cfg.threads);
  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < cfg.instances; i += workers) {
        outcomes[static_cast<std::size_t>(i)] = run_instance(cfg.seed + static_cast<std::uint64_t>(i), cfg.tau);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  r.timings["instances"] = seconds_since(start);

  Table inst{"instances",
             {"instance", "seed", "alpha", "harm_fragile", "harm_envelope", "harm_class_mean", "utility_fragile",
              "utility_envelope", "utility_class_mean", "gap", "tied_solves"},
             {}};
  std::array<Rational, 3> harm_sum, util_sum;
  std::array<int, 3> feasible{0, 0, 0};
  Rational alpha_sum = 0, gap_sum = 0;
  std::optional<Rational> alpha_min, gap_min;
  int alpha_count = 0, positive = 0, gap_count = 0, clean = 0, tie_instances = 0;
  std::vector<Rational> gaps;
  auto cell = [](const std::optional<Rational>& v) { return v ? to_exact_string(*v) : std::string("infeasible"); };
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const InstanceOutcome& o = outcomes[i];
    clean += o.clean ? 1 : 0;
    tie_instances += o.ties > 0 ? 1 : 0;
    if (o.alpha) {
      alpha_sum += *o.alpha;
      ++alpha_count;
      if (!alpha_min || *o.alpha < *alpha_min) alpha_min = o.alpha;
    }
    for (std::size_t k = 0; k < 3; ++k) {
      if (!o.harm[k]) continue;
      harm_sum[k] += *o.harm[k];
      util_sum[k] += *o.utility[k];
      ++feasible[k];
    }
    std::optional<Rational> gap;
    if (o.harm[0] && o.harm[1]) {
      gap = *o.harm[0] - *o.harm[1];
      gaps.push_back(*gap);
      gap_sum += *gap;
      ++gap_count;
      if (*gap > 0) ++positive;
      if (!gap_min || *gap < *gap_min) gap_min = gap;
    }
    inst.rows.push_back({std::to_string(i), std::to_string(o.seed), cell(o.alpha), cell(o.harm[0]), cell(o.harm[1]),
                         cell(o.harm[2]), cell(o.utility[0]), cell(o.utility[1]), cell(o.utility[2]), cell(gap),
                         std::to_string(o.ties)});
  }
  r.tables.push_back(std::move(inst));

  auto mean = [](const Rational& sum, int n) { return n > 0 ? sum / n : Rational(0); };
  const Rational harm_f = mean(harm_sum[0], feasible[0]), harm_e = mean(harm_sum[1], feasible[1]),
                 harm_c = mean(harm_sum[2], feasible[2]);
  const Rational alpha_mean = mean(alpha_sum, alpha_count);
  Table agg{"aggregates", {"quantity", "value", "exact", "reference"}, {}};
  auto add = [&](const std::string& q, const Rational& v, const std::string& ref) {
    // Means over hundreds of catalogs have enormous denominators; past a
    // readable length the exact column falls back to 12 decimals.
    const std::string exact = to_exact_string(v);
    agg.rows.push_back({q, to_fixed(v), exact.size() <= 40 ? exact : to_fixed(v, 12), ref});
  };
  add("mean_harm_fragile", harm_f, "1.00");
  add("mean_harm_envelope", harm_e, "0.116");
  add("mean_harm_class_mean", harm_c, "0.266");
  add("mean_gap", mean(gap_sum, gap_count), "0.884");
  add("min_gap", gap_min.value_or(0), "0.76");
  add("mean_utility_fragile", mean(util_sum[0], feasible[0]), "0.887");
  add("mean_utility_envelope", mean(util_sum[1], feasible[1]), "0.684");
  add("mean_utility_class_mean", mean(util_sum[2], feasible[2]), "0.712");
  add("mean_global_alpha", alpha_mean, "0.789");
  add("min_global_alpha", alpha_min.value_or(0), "0.750");
  agg.rows.push_back({"instances_with_ties", std::to_string(tie_instances), std::to_string(tie_instances), ""});
  r.tables.push_back(std::move(agg));

  std::sort(gaps.begin(), gaps.end());
  Table cdf{"gap_cdf", {"gap", "cumulative_fraction"}, {}};
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    cdf.rows.push_back({to_fixed(gaps[i], 4), to_fixed(Rational(static_cast<long>(i + 1), static_cast<long>(gaps.size())), 4)});
  }
  r.tables.push_back(std::move(cdf));

  const int n = cfg.instances;
  r.checks.push_back(check_true("sampled catalogs valid and harm-pure", clean == n, std::to_string(n), std::to_string(clean)));
  r.checks.push_back(check_true("all instances feasible under every metric",
                                feasible[0] == n && feasible[1] == n && feasible[2] == n));
  if (cfg.tau != Rational(1, 5)) return r;
  r.checks.push_back(check_exact("mean fragile harm", harm_f, 1));
  r.checks.push_back(check_within("mean envelope harm", harm_e, dec("0.066"), dec("0.166")));
  r.checks.push_back(check_within("mean class-mean harm", harm_c, dec("0.196"), dec("0.336")));
  r.checks.push_back(check_true("gap strictly positive in every instance", positive == n, std::to_string(n),
                                std::to_string(positive)));
  r.checks.push_back(check_within("mean global alpha", alpha_mean, dec("0.75"), dec("0.83")));
  r.checks.push_back(check_true("min global alpha at least 0.75", alpha_min && *alpha_min >= dec("0.75"), ">= 0.750",
                                to_fixed(alpha_min.value_or(0))));
  return r;
}

// ---------------------------------------------------------------------------
// HateCheck-derived instance

ExperimentResult run_hatecheck(const Rational& tau) {
  const Catalog cat = hatecheck_catalog();
  ExperimentResult r;
  r.id = "hatecheck";
  r.input_digest = sha256_hex(r.id + "\ntau=" + to_exact_string(tau) + "\n" + catalog_digest_input(cat));
  r.metadata["tau"] = to_exact_string(tau);
  r.metadata["scores"] = "0.92*(1-0.3i) for case i=0,1,2 of each harmful class; benign 0.05";
  r.metadata["utilities"] = "harmful 0.70+0.25*(1-score)-0.01*class index; benign 0.60";

  struct Side {
    Vector<Rational> mass;
    Vector<Rational> harm;
    Rational measured;
  };
  std::map<ScoreKind, Side> sides;
  for (ScoreKind kind : {ScoreKind::kFragile, ScoreKind::kEnvelope}) {
    const auto br = solve(cat, make_lp(cat, kind, tau));
    if (!br) throw std::runtime_error("hatecheck instance infeasible at this budget");
    const Strategy harm_part = br->strategy.cwiseProduct(cat.latent_harm());
    sides[kind] = {class_mass(cat, br->strategy), class_mass(cat, harm_part), br->measured};
    r.checks.push_back(check_exact(std::string(to_string(kind)) + " measured score equals budget", br->measured, tau));
  }
  Table t{"class_exposure",
          {"class", "harmful", "mass_fragile", "mass_envelope", "harm_fragile", "harm_envelope", "mass_fragile_exact",
           "mass_envelope_exact"},
          {}};
  const Side& f = sides[ScoreKind::kFragile];
  const Side& e = sides[ScoreKind::kEnvelope];
  for (Eigen::Index c = 0; c < cat.num_classes(); ++c) {
    const auto& cls = cat.classes()[c];
    t.rows.push_back({cls.id, std::to_string(cls.audited_label), to_fixed(f.mass[c]), to_fixed(e.mass[c]),
                      to_fixed(f.harm[c]), to_fixed(e.harm[c]), to_exact_string(f.mass[c]), to_exact_string(e.mass[c])});
  }
  r.tables.push_back(std::move(t));

  if (tau != Rational(1, 5)) return r;
  const std::map<std::string, std::array<const char*, 4>> published{
      {"threat_dir_h", {"0.472", "0.172", "0.472", "0.172"}},
      {"ident_neutral_nh", {"0.528", "0.828", "0.000", "0.000"}},
  };
  for (const auto& [cls, vals] : published) {
    const Eigen::Index c = *cat.class_index(cls);
    r.checks.push_back(check_3dp(cls + " mass fragile", f.mass[c], vals[0]));
    r.checks.push_back(check_3dp(cls + " mass envelope", e.mass[c], vals[1]));
    r.checks.push_back(check_3dp(cls + " harm fragile", f.harm[c], vals[2]));
    r.checks.push_back(check_3dp(cls + " harm envelope", e.harm[c], vals[3]));
  }
  for (const char* cls : {"derog_neg_emote_h_racial", "derog_neg_emote_h_women"}) {
    const Eigen::Index c = *cat.class_index(cls);
    r.checks.push_back(check_exact(std::string(cls) + " mass fragile", f.mass[c], 0));
    r.checks.push_back(check_exact(std::string(cls) + " mass envelope", e.mass[c], 0));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Certified-ceiling sensitivity

ExperimentResult run_sensitivity_sweep(const Rational& tau) {
  ExperimentResult r;
  r.id = "sensitivity_sweep";
  std::vector<Rational> alphas, etas;
  for (int a = 20; a <= 100; ++a) alphas.emplace_back(a, 100);
  for (int e = 0; e <= 20; e += 5) etas.emplace_back(e, 100);
  r.input_digest = sha256_hex(r.id + "\ntau=" + to_exact_string(tau) + "\nalpha=0.20:0.01:1.00\neta=0,0.05,0.10,0.15,0.20\n");
  r.metadata["tau"] = to_exact_string(tau);
  const CeilingGrid grid = ceiling_sweep(tau, alphas, etas);

  Table t{"ceiling_grid", {"alpha", "eta", "ceiling", "raw_ceiling", "meaningful", "ceiling_exact"}, {}};
  bool clipped = true;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t j = 0; j < etas.size(); ++j) {
      const Rational c = grid.ceiling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const Rational raw = tau / alphas[i] + etas[j];
      clipped = clipped && c <= 1 && c >= 0;
      t.rows.push_back({to_fixed(alphas[i], 2), to_fixed(etas[j], 2), to_fixed(c), to_fixed(raw), raw < 1 ? "1" : "0",
                        to_exact_string(c)});
    }
  }
  r.tables.push_back(std::move(t));
  Table b{"meaningful_boundary", {"eta", "alpha_boundary", "alpha_boundary_exact"}, {}};
  for (std::size_t j = 0; j < etas.size(); ++j) {
    const auto& edge = grid.boundary[j];
    b.rows.push_back({to_fixed(etas[j], 2), edge ? to_fixed(*edge) : "none", edge ? to_exact_string(*edge) : "none"});
  }
  r.tables.push_back(std::move(b));

  r.checks.push_back(check_true("ceilings clipped to [0,1]", clipped));
  r.checks.push_back(check_exact("ceiling alpha=1 eta=0 equals budget", certified_ceiling(tau, 1, 0), std::min(tau, Rational(1))));
  if (tau != Rational(1, 5)) return r;
  r.checks.push_back(check_3dp("ceiling alpha=0.85 eta=0", certified_ceiling(tau, dec("0.85"), 0), "0.235"));
  r.checks.push_back(check_3dp("ceiling alpha=0.85 eta=0.10", certified_ceiling(tau, dec("0.85"), dec("0.10")), "0.335"));
  r.checks.push_back(check_3dp("ceiling alpha=0.85 eta=0.20", certified_ceiling(tau, dec("0.85"), dec("0.20")), "0.435"));
  r.checks.push_back(check_3dp("ceiling alpha=0.90 eta=0.18", certified_ceiling(tau, dec("0.90"), dec("0.18")), "0.402"));
  return r;
}

// ---------------------------------------------------------------------------
// Protocol sensitivity and grid verification

namespace {

std::string render_partition(const Catalog& catalog) {
  std::vector<std::string> cells;
  for (const auto& c : catalog.classes()) cells.push_back(c.id + ":{" + join(c.member_ids, ",") + "}");
  return join(cells, " | ");
}

struct GridOutcome {
  Rational alpha;
  GridMaximum<Rational> fragile;
  GridMaximum<Rational> envelope;
};

GridOutcome grid_violations(const Catalog& cat, long k, int threads) {
  const auto alpha = coverage(cat, 0).global_alpha;
  if (!alpha || *alpha <= 0) throw UncertifiableError("six-variant model has no positive coverage");
  const GridSpec spec{k, cat.size()};
  return {*alpha, max_violation(cat, fragile_score(cat), *alpha, spec, threads),
          max_violation(cat, envelope_lift(cat), *alpha, spec, threads)};
}

std::string support_of(const Catalog& cat, const Strategy& x) { return render_strategy(cat, x); }

}  // namespace

ExperimentResult run_protocol_sensitivity(const std::vector<Rational>& thresholds, long grid_denominator) {
  ExperimentResult r;
  r.id = "protocol_sensitivity";
  std::string digest_input = r.id + "\nk=" + std::to_string(grid_denominator) + "\n" +
                             catalog_digest_input(six_variant_catalog()) +
                             write_edges_csv(six_variant_protocol(0).candidate_edges);
  for (const auto& rho : thresholds) digest_input += "rho=" + to_exact_string(rho) + "\n";
  r.input_digest = sha256_hex(digest_input);
  r.metadata["grid_step"] = "1/" + std::to_string(grid_denominator);
  r.metadata["split_label_rule"] = "cells split from a class inherit its audited label";

  const int threads = worker_count(0);
  Table t{"thresholds",
          {"rho", "alpha", "partition", "fragile_violation", "envelope_violation", "fragile_violation_exact",
           "envelope_violation_exact", "fragile_witness"},
          {}};
  Table notes{"label_notes", {"rho", "note"}, {}};
  std::vector<RelabeledCatalog> cats;
  const auto start = Clock::now();
  for (const auto& rho : thresholds) {
    RelabeledCatalog rc = six_variant_at(rho);
    const GridOutcome g = grid_violations(rc.catalog, grid_denominator, threads);
    t.rows.push_back({to_fixed(rho, 2), to_fixed(g.alpha), render_partition(rc.catalog), to_fixed(g.fragile.value),
                      to_fixed(g.envelope.value), to_exact_string(g.fragile.value), to_exact_string(g.envelope.value),
                      support_of(rc.catalog, g.fragile.witness)});
    for (const auto& n : rc.label_notes) notes.rows.push_back({to_fixed(rho, 2), n});
    if (grid_denominator == 20 && rho == dec("0.70")) {
      r.checks.push_back(check_3dp("rho=0.70 alpha", g.alpha, "0.850"));
      r.checks.push_back(check_3dp("rho=0.70 fragile violation", g.fragile.value, "0.882"));
      r.checks.push_back(check_exact("rho=0.70 envelope violation", g.envelope.value, 0));
      r.checks.push_back(check_true("rho=0.70 harmful classes merged",
                                    rc.catalog.class_index("H1") && rc.catalog.class_index("H2") &&
                                        rc.catalog.members(*rc.catalog.class_index("H2")).size() == 2));
    }
    if (grid_denominator == 20 && rho == dec("0.90")) {
      r.checks.push_back(check_3dp("rho=0.90 alpha", g.alpha, "0.100"));
      r.checks.push_back(check_3dp("rho=0.90 fragile violation", g.fragile.value, "0.000"));
      r.checks.push_back(check_3dp("rho=0.90 envelope violation", g.envelope.value, "0.000"));
      r.checks.push_back(check_true("rho=0.90 H1 merged and H2 split",
                                    rc.catalog.class_index("H1") && !rc.catalog.class_index("H2") &&
                                        rc.catalog.num_classes() == 5));
    }
    cats.push_back(std::move(rc));
  }
  r.timings["grid_scans"] = seconds_since(start);
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(notes));

  // Envelope per variant under every threshold, and pairwise monotonicity.
  Table pointwise{"envelope_pointwise", {"variant"}, {}};
  for (const auto& rho : thresholds) pointwise.columns.push_back("rho_" + to_fixed(rho, 2));
  const Catalog base = six_variant_catalog();
  std::vector<RationalVector> env;
  for (const auto& rc : cats) {
    const RationalVector lifted = envelope_lift(rc.catalog).values;
    RationalVector aligned(base.size());
    for (Eigen::Index v = 0; v < base.size(); ++v) aligned[v] = lifted[*rc.catalog.variant_index(base.variants()[v].id)];
    env.push_back(aligned);
  }
  for (Eigen::Index v = 0; v < base.size(); ++v) {
    std::vector<std::string> row{base.variants()[v].id};
    for (const auto& e : env) row.push_back(to_exact_decimal(e[v]));
    pointwise.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(pointwise));
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      if (!(thresholds[i] < thresholds[j])) continue;
      const std::string pair = to_fixed(thresholds[j], 2) + " vs " + to_fixed(thresholds[i], 2);
      r.checks.push_back(check_true("partition at " + pair + " refines",
                                    refines(partition_of(cats[j].catalog), partition_of(cats[i].catalog))));
      r.checks.push_back(check_true("envelope pointwise monotone " + pair, (env[j].array() <= env[i].array()).all()));
    }
  }
  return r;
}

ExperimentResult run_grid_on(const Catalog& cat, long grid_denominator, int threads) {
  require_valid(cat);
  ExperimentResult r;
  r.id = "grid";
  r.input_digest = sha256_hex(r.id + "\nk=" + std::to_string(grid_denominator) + "\n" + catalog_digest_input(cat));
  r.metadata["grid_step"] = "1/" + std::to_string(grid_denominator);
  r.metadata["order"] = "descending lexicographic weak compositions; first maximizer kept";

  const GridSpec spec{grid_denominator, cat.size()};
  const Integer count = grid_size(spec);
  auto start = Clock::now();
  const GridOutcome g = grid_violations(cat, grid_denominator, worker_count(threads));
  r.timings["violation_scan"] = seconds_since(start);

  Table t{"violations", {"metric", "alpha", "max_violation", "max_violation_exact", "witness", "visited"}, {}};
  for (const auto& [name, m] : {std::pair{"fragile", &g.fragile}, std::pair{"envelope", &g.envelope}}) {
    t.rows.push_back({name, to_exact_string(g.alpha), to_fixed(m->value), to_exact_string(m->value),
                      render_strategy(cat, m->witness), std::to_string(m->visited)});
  }
  r.tables.push_back(std::move(t));
  r.checks.push_back(check_true("grid strategies visited", Integer(g.fragile.visited) == count && Integer(g.envelope.visited) == count,
                                count.str(), std::to_string(g.fragile.visited)));

  // A linear objective peaks at a vertex, and every vertex lies on the grid.
  for (const auto& [name, m, score] :
       {std::tuple{"fragile", &g.fragile, fragile_score(cat)}, std::tuple{"envelope", &g.envelope, envelope_lift(cat)}}) {
    const RationalVector w = cat.latent_harm() - score.values / g.alpha;
    r.checks.push_back(check_exact(std::string(name) + " grid maximum equals best vertex", m->value, w.maxCoeff()));
  }

  start = Clock::now();
  const auto frag_pair = grid_invariance_check(cat, fragile_score(cat), spec);
  const auto env_pair = grid_invariance_check(cat, envelope_lift(cat), spec);
  r.timings["invariance_scan"] = seconds_since(start);
  Table inv{"invariance", {"metric", "witness_found", "x", "y"}, {}};
  inv.rows.push_back({"fragile", frag_pair ? "1" : "0", frag_pair ? render_strategy(cat, frag_pair->first) : "",
                      frag_pair ? render_strategy(cat, frag_pair->second) : ""});
  inv.rows.push_back({"envelope", env_pair ? "1" : "0", env_pair ? render_strategy(cat, env_pair->first) : "",
                      env_pair ? render_strategy(cat, env_pair->second) : ""});
  r.tables.push_back(std::move(inv));
  r.checks.push_back(check_true("envelope has no grid invariance witness", !env_pair));
  bool frag_ok = false;
  if (frag_pair) {
    frag_ok = class_mass(cat, frag_pair->first) == class_mass(cat, frag_pair->second) &&
              evaluate(fragile_score(cat), frag_pair->first) != evaluate(fragile_score(cat), frag_pair->second);
  }
  r.checks.push_back(check_true("fragile grid invariance witness is mass-equivalent with a metric gap", frag_ok));

  // The threaded scan must agree with the sequential one.
  const auto sequential = max_violation(cat, fragile_score(cat), g.alpha, spec, 1);
  r.checks.push_back(check_true("threaded and sequential scans agree",
                                sequential.counts == g.fragile.counts && sequential.value == g.fragile.value));
  return r;
}

ExperimentResult run_grid(long grid_denominator, const Rational& rho, int threads) {
  const RelabeledCatalog rc = six_variant_at(rho);
  const Catalog& cat = rc.catalog;
  ExperimentResult r = run_grid_on(cat, grid_denominator, threads);
  r.input_digest = sha256_hex(r.input_digest + "rho=" + to_exact_string(rho));
  r.metadata["rho"] = to_exact_string(rho);
  if (grid_denominator == 20 && rho == dec("0.70")) {
    const Table& v = r.table("violations");
    const Rational fragile = parse_rational(v.rows[0][3]), envelope = parse_rational(v.rows[1][3]);
    r.checks.push_back(check_exact("grid size", Rational(grid_size({grid_denominator, cat.size()})), 53130));
    r.checks.push_back(check_exact("fragile max violation", fragile, Rational(15, 17)));
    r.checks.push_back(check_3dp("fragile max violation (3dp)", fragile, "0.882"));
    r.checks.push_back(check_exact("envelope max violation", envelope, 0));
    r.checks.push_back(check_true("fragile witness is a point mass on H2-manip", v.rows[0][4] == "H2-manip:1",
                                  "H2-manip:1", v.rows[0][4]));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Formal layer

namespace {

struct NamedCatalog {
  std::string name;
  Catalog catalog;
};

Verdict reference_verdict(SmtProperty p) {
  return p == SmtProperty::kFragilityWitness ? Verdict::kSat : Verdict::kUnsat;
}

bool is_default(const AuditMdp& m) {
  const AuditMdp d;
  return m.grid_denominator == d.grid_denominator && m.benign_cost == d.benign_cost && m.orig_cost == d.orig_cost &&
         m.manip_cost == d.manip_cost && m.envelope_cost == d.envelope_cost && m.budget == d.budget;
}

void merge_into(ExperimentResult& into, ExperimentResult&& from) {
  for (auto& t : from.tables) into.tables.push_back(std::move(t));
  for (auto& c : from.checks) into.checks.push_back(std::move(c));
  for (auto& [k, v] : from.artifacts) into.artifacts[k] = std::move(v);
  for (auto& [k, v] : from.metadata) into.metadata[from.id + "." + k] = std::move(v);
  for (auto& [k, v] : from.timings) into.timings[from.id + "." + k] = v;
}

}  // namespace

ExperimentResult run_smt(const FormalConfig& cfg) {
  ExperimentResult r;
  r.id = "smt";
  std::vector<NamedCatalog> suite{{"six_variant", six_variant_catalog()}};
  for (int nh : {5, 10, 20, 40}) suite.push_back({"random_n" + std::to_string(5 + 2 * nh), scalability_family(nh, cfg.seed)});
  std::vector<NamedCatalog> scaling;
  if (cfg.scalability) {
    for (int nh : {100, 250, 500}) scaling.push_back({"random_n" + std::to_string(5 + 2 * nh), scalability_family(nh, cfg.seed)});
  }
  std::string digest_input = r.id + "\nseed=" + std::to_string(cfg.seed) + "\n";
  for (const auto& nc : suite) digest_input += nc.name + "\n" + catalog_digest_input(nc.catalog);
  r.input_digest = sha256_hex(digest_input);
  r.metadata["logic"] = "QF_LRA";
  r.metadata["fragility_margin"] = to_exact_string(kFragilityMargin);
  r.metadata["generator"] = kGeneratorAlgorithm;
  r.metadata["generator_seed"] = std::to_string(cfg.seed);
  r.metadata["timeout_ms"] = std::to_string(cfg.timeout.count());
  std::vector<std::string> solver_names;
  for (const auto& s : cfg.solvers) solver_names.push_back(s.name + "=" + s.executable.string());
  r.metadata["solvers"] = solver_names.empty() ? "none configured" : join(solver_names, ",");

  Table t{"queries", {"catalog", "variants", "property", "expected", "round_trip", "witness_checked"}, {}};
  for (const auto& s : cfg.solvers) {
    t.columns.push_back(s.name + "_verdict");
  }
  // Solver timings vary run to run, so they go in a separate table.
  Table timing{"solver_times", {"catalog", "property", "solver", "seconds"}, {}};

  struct Tally {
    int queries = 0, reference_match = 0, round_trips = 0, witnesses = 0, sat_expected = 0;
  };
  std::map<std::string, std::pair<int, int>> solver_score;  // answered, matched
  std::map<std::string, bool> solver_available;
  int agreement = 0, agreement_total = 0;
  double slowest_scaling = 0.0;
  std::map<std::string, int> scaling_mismatch;

  auto process = [&](const NamedCatalog& nc, bool in_suite, Tally& tally) {
    const auto alpha = coverage(nc.catalog, 0).global_alpha;
    for (SmtProperty p :
         {SmtProperty::kEnvelopeInvariance, SmtProperty::kFragilityWitness, SmtProperty::kCertification}) {
      const SmtQuery q = emit_smt(nc.catalog, p, alpha.value_or(1), nc.name);
      r.artifacts["smt/" + q.name + ".smt2"] = q.text;
      ++tally.queries;
      tally.reference_match += q.expected_verdict == reference_verdict(p) ? 1 : 0;
      bool round_trip = false;
      try {
        round_trip = parse_smt(q.text).canonical() == q.system.canonical();
      } catch (const std::exception&) {
        round_trip = false;
      }
      tally.round_trips += round_trip ? 1 : 0;
      bool witness_ok = true;
      if (q.expected_verdict == Verdict::kSat) {
        ++tally.sat_expected;
        witness_ok = q.system.satisfied_by(q.witness);
        tally.witnesses += witness_ok ? 1 : 0;
      }
      std::vector<std::string> row{nc.name, std::to_string(nc.catalog.size()), std::string(to_string(p)),
                                   std::string(to_string(q.expected_verdict)), round_trip ? "1" : "0",
                                   q.expected_verdict == Verdict::kSat ? (witness_ok ? "1" : "0") : "n/a"};
      std::vector<Verdict> answers;
      for (const auto& s : cfg.solvers) {
        const SolverRun run = run_external_solver(s, q, cfg.timeout);
        row.push_back(std::string(to_string(run.verdict)));
        timing.rows.push_back({nc.name, std::string(to_string(p)), s.name, to_fixed(Rational(static_cast<long long>(run.elapsed_seconds * 1000), 1000))});
        if (run.verdict == Verdict::kUnavailable) {
          solver_available.try_emplace(s.name, false);
          continue;
        }
        solver_available[s.name] = true;
        answers.push_back(run.verdict);
        if (in_suite) {
          auto& [answered, matched] = solver_score[s.name];
          ++answered;
          matched += run.verdict == q.expected_verdict ? 1 : 0;
        } else {
          slowest_scaling = std::max(slowest_scaling, run.elapsed_seconds);
          if (run.verdict != q.expected_verdict) ++scaling_mismatch[s.name];
        }
      }
      if (in_suite && answers.size() >= 2) {
        ++agreement_total;
        agreement += std::all_of(answers.begin(), answers.end(), [&](Verdict v) { return v == answers.front(); }) ? 1 : 0;
      }
      t.rows.push_back(std::move(row));
    }
  };

  const auto start = Clock::now();
  Tally suite_tally;
  for (const auto& nc : suite) process(nc, true, suite_tally);
  r.timings["suite"] = seconds_since(start);
  const std::string total = std::to_string(suite_tally.queries);
  r.checks.push_back(check_true("expected verdicts follow UNSAT/SAT/UNSAT", suite_tally.reference_match == suite_tally.queries,
                                total + "/" + total, std::to_string(suite_tally.reference_match) + "/" + total));
  r.checks.push_back(check_true("emitted scripts round-trip", suite_tally.round_trips == suite_tally.queries,
                                total + "/" + total, std::to_string(suite_tally.round_trips) + "/" + total));
  r.checks.push_back(check_true("SAT witnesses satisfy their systems", suite_tally.witnesses == suite_tally.sat_expected,
                                std::to_string(suite_tally.sat_expected), std::to_string(suite_tally.witnesses)));
  for (const auto& s : cfg.solvers) {
    if (!solver_available[s.name]) {
      r.metadata["solver." + s.name] = "external solver unavailable";
      continue;
    }
    const auto [answered, matched] = solver_score[s.name];
    r.checks.push_back(check_true(s.name + " returns the expected verdicts", matched == suite_tally.queries,
                                  total + "/" + total, std::to_string(matched) + "/" + total));
  }
  if (agreement_total > 0) {
    r.checks.push_back(check_true("cross-solver agreement", agreement == agreement_total && agreement_total == suite_tally.queries,
                                  total + "/" + total, std::to_string(agreement) + "/" + std::to_string(agreement_total)));
  }

  if (!scaling.empty()) {
    const auto scale_start = Clock::now();
    Tally scale_tally;
    for (const auto& nc : scaling) process(nc, false, scale_tally);
    r.timings["scalability"] = seconds_since(scale_start);
    r.timings["scalability.slowest_solver_query"] = slowest_scaling;
    r.checks.push_back(check_true("scalability scripts round-trip", scale_tally.round_trips == scale_tally.queries,
                                  std::to_string(scale_tally.queries), std::to_string(scale_tally.round_trips)));
    for (const auto& s : cfg.solvers) {
      if (!solver_available[s.name]) continue;
      r.checks.push_back(check_true(s.name + " scalability verdicts", scaling_mismatch[s.name] == 0, "0 mismatches",
                                    std::to_string(scaling_mismatch[s.name]) + " mismatches"));
    }
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(timing));
  return r;
}

ExperimentResult run_mdp(const AuditMdp& mdp) {
  ExperimentResult r;
  r.id = "mdp";
  const PrismArtifact prism = emit_prism(mdp);
  r.input_digest = sha256_hex(r.id + "\n" + prism.model);
  r.artifacts["prism/audit_mdp.prism"] = prism.model;
  r.artifacts["prism/audit_mdp.props"] = prism.properties;
  r.metadata["grid"] = "i/" + std::to_string(mdp.grid_denominator);
  r.metadata["budget"] = to_exact_string(mdp.budget);

  const auto start = Clock::now();
  std::map<std::string, Rational> values;
  for (ScoreKind metric : {ScoreKind::kFragile, ScoreKind::kEnvelope}) {
    for (VariantChoice variant : {VariantChoice::kOriginal, VariantChoice::kManipulated}) {
      AuditMdp m = mdp;
      m.metric = metric;
      m.variant = variant;
      values[reward_name(metric, variant)] = solve_mdp(m);
    }
  }
  r.timings["enumeration"] = seconds_since(start);
  const auto explore_start = Clock::now();
  const MdpExploration ex = explore_mdp(mdp);
  r.timings["exploration"] = seconds_since(explore_start);

  Table t{"values", {"reward", "enumeration", "exploration", "enumeration_exact"}, {}};
  bool agree = true;
  for (const auto& [name, v] : values) {
    t.rows.push_back({name, to_fixed(v, 2), to_fixed(ex.values.at(name), 2), to_exact_string(v)});
    agree = agree && ex.values.at(name) == v;
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back({"state_space",
                      {"states", "transitions"},
                      {{std::to_string(ex.states), std::to_string(ex.transitions)}}});

  const Rational fo = values.at("harm_frag_orig"), fm = values.at("harm_frag_manip");
  const Rational eo = values.at("harm_env_orig"), em = values.at("harm_env_manip");
  r.checks.push_back(check_true("enumeration and state exploration agree", agree));
  r.checks.push_back(check_exact("envelope value independent of variant", eo, em));
  if (is_default(mdp)) {
    r.checks.push_back(check_exact("fragile orig value", fo, Rational(1, 10)));
    r.checks.push_back(check_exact("fragile manip value", fm, 1));
    r.checks.push_back(check_exact("envelope orig value", eo, Rational(1, 10)));
    r.checks.push_back(check_exact("envelope manip value", em, Rational(1, 10)));
    r.checks.push_back(check_exact("fragile gap", fm - fo, Rational(9, 10)));
    r.checks.push_back(check_true("reachable states", ex.states == 148, "148", std::to_string(ex.states)));
    r.checks.push_back(check_true("transitions", ex.transitions == 231, "231", std::to_string(ex.transitions)));
  }
  return r;
}

ExperimentResult run_formal(const FormalConfig& cfg) {
  ExperimentResult r;
  r.id = "formal";
  ExperimentResult smt = run_smt(cfg);
  ExperimentResult mdp = run_mdp(cfg.mdp);
  r.input_digest = sha256_hex(smt.input_digest + mdp.input_digest);
  merge_into(r, std::move(smt));
  merge_into(r, std::move(mdp));
  return r;
}

// ---------------------------------------------------------------------------
// Output

std::string to_csv(const Table& table) {
  std::ostringstream out;
  out << join(table.columns, ",") << "\n";
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    for (const auto& c : row) {
      // Cells with separators are quoted for spreadsheet readers.
      cells.push_back(c.find_first_of(",\"") == std::string::npos ? c : "\"" + c + "\"");
    }
    out << join(cells, ",") << "\n";
  }
  return out.str();
}

std::string to_json(const ExperimentResult& result, bool include_timings) {
  nlohmann::ordered_json j;
  j["id"] = result.id;
  j["input_digest"] = result.input_digest;
  j["passed"] = result.passed();
  j["metadata"] = result.metadata;
  auto& tables = j["tables"] = nlohmann::ordered_json::object();
  for (const auto& t : result.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) obj[t.columns[i]] = row[i];
      rows.push_back(std::move(obj));
    }
    tables[t.name] = std::move(rows);
  }
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : result.checks) {
    checks.push_back({{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  }
  j["checks"] = std::move(checks);
  auto artifacts = nlohmann::ordered_json::array();
  for (const auto& [path, text] : result.artifacts) artifacts.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
  j["artifacts"] = std::move(artifacts);
  if (include_timings) j["timings"] = result.timings;
  return j.dump(2) + "\n";
}

void write_result(const ExperimentResult& result, const std::filesystem::path& out_dir, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    write_file(out_dir / (result.id + ".json"), to_json(result));
  } else {
    for (const auto& t : result.tables) write_file(out_dir / result.id / (t.name + ".csv"), to_csv(t));
    Table checks{"checks", {"name", "expected", "observed", "tolerance", "passed"}, {}};
    for (const auto& c : result.checks) checks.rows.push_back({c.name, c.expected, c.observed, c.tolerance, c.passed ? "1" : "0"});
    write_file(out_dir / result.id / "checks.csv", to_csv(checks));
    Table meta{"metadata", {"key", "value"}, {{"id", result.id}, {"input_digest", result.input_digest}}};
    for (const auto& [k, v] : result.metadata) meta.rows.push_back({k, v});
    write_file(out_dir / result.id / "metadata.csv", to_csv(meta));
  }
  for (const auto& [path, text] : result.artifacts) write_file(out_dir / "artifacts" / path, text);
}

void write_summary(const std::vector<ExperimentResult>& results, const std::filesystem::path& out_dir,
                   OutputFormat format, const std::map<std::string, std::string>& invocation) {
  Table summary{"summary", {"experiment", "checks", "passed", "verdict", "input_digest"}, {}};
  for (const auto& r : results) {
    const auto ok = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.passed; });
    summary.rows.push_back({r.id, std::to_string(r.checks.size()), std::to_string(ok), r.passed() ? "PASS" : "FAIL",
                            r.input_digest});
  }
  if (format == OutputFormat::kJson) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : summary.rows) {
      j.push_back({{"experiment", row[0]}, {"checks", row[1]}, {"passed", row[2]}, {"verdict", row[3]},
                   {"input_digest", row[4]}});
    }
    write_file(out_dir / "summary.json", j.dump(2) + "\n");
  } else {
    write_file(out_dir / "summary.csv", to_csv(summary));
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "semaudit";
  manifest["version"] = kVersion;
  manifest["generator"] = kGeneratorAlgorithm;
  manifest["compiler"] = __VERSION__;
  manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  manifest["invocation"] = invocation;
  auto exps = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json e;
    e["id"] = r.id;
    e["input_digest"] = r.input_digest;
    e["output_digest"] = sha256_hex(to_json(r));
    e["metadata"] = r.metadata;
    e["timings_seconds"] = r.timings;
    exps.push_back(std::move(e));
  }
  manifest["experiments"] = std::move(exps);
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace semaudit
