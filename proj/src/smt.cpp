#include "semaudit/smt.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "semaudit/metric.hpp"

namespace semaudit {

std::string_view to_string(SmtProperty property) {
  switch (property) {
    case SmtProperty::kEnvelopeInvariance:
      return "envelope_invariance";
    case SmtProperty::kFragilityWitness:
      return "fragility_witness";
    case SmtProperty::kCertification:
      return "certification";
  }
  return "unknown";
}

SmtProperty parse_smt_property(std::string_view name) {
  if (name == "envelope_invariance" || name == "invariance") return SmtProperty::kEnvelopeInvariance;
  if (name == "fragility_witness" || name == "fragility") return SmtProperty::kFragilityWitness;
  if (name == "certification") return SmtProperty::kCertification;
  throw std::invalid_argument("unknown SMT property: " + std::string(name));
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSat:
      return "sat";
    case Verdict::kUnsat:
      return "unsat";
    case Verdict::kUnknown:
      return "unknown";
    case Verdict::kTimeout:
      return "timeout";
    case Verdict::kUnknownOutput:
      return "unknown-output";
    case Verdict::kUnavailable:
      return "external solver unavailable";
    case Verdict::kError:
      return "error";
  }
  return "unknown";
}

namespace {

std::string_view relation_symbol(Relation r) {
  switch (r) {
    case Relation::kLess:
      return "<";
    case Relation::kLessEqual:
      return "<=";
    case Relation::kEqual:
      return "=";
    case Relation::kGreaterEqual:
      return ">=";
    case Relation::kGreater:
      return ">";
  }
  return "=";
}

}  // namespace

LinearConstraint LinearConstraint::canonical() const {
  std::map<std::string, Rational> merged;
  for (const auto& [var, coeff] : terms) merged[var] += coeff;
  LinearConstraint out;
  out.relation = relation;
  out.rhs = rhs;
  for (const auto& [var, coeff] : merged) {
    if (coeff != 0) out.terms.emplace_back(var, coeff);
  }
  return out;
}

bool LinearConstraint::holds(const std::map<std::string, Rational>& assignment) const {
  Rational lhs = 0;
  for (const auto& [var, coeff] : terms) {
    auto it = assignment.find(var);
    if (it != assignment.end()) lhs += coeff * it->second;
  }
  switch (relation) {
    case Relation::kLess:
      return lhs < rhs;
    case Relation::kLessEqual:
      return lhs <= rhs;
    case Relation::kEqual:
      return lhs == rhs;
    case Relation::kGreaterEqual:
      return lhs >= rhs;
    case Relation::kGreater:
      return lhs > rhs;
  }
  return false;
}

ConstraintSystem ConstraintSystem::canonical() const {
  ConstraintSystem out;
  out.logic = logic;
  out.variables = variables;
  for (const Assertion& a : assertions) {
    Assertion c;
    for (const LinearConstraint& d : a.disjuncts) c.disjuncts.push_back(d.canonical());
    out.assertions.push_back(std::move(c));
  }
  return out;
}

bool ConstraintSystem::satisfied_by(const std::map<std::string, Rational>& assignment) const {
  for (const Assertion& a : assertions) {
    const bool any = std::any_of(a.disjuncts.begin(), a.disjuncts.end(),
                                 [&](const LinearConstraint& d) { return d.holds(assignment); });
    if (!any) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

std::string var_name(char prefix, Eigen::Index i) { return std::string(1, prefix) + "_" + std::to_string(i); }

void add_simplex(ConstraintSystem& sys, const Catalog& catalog, char prefix) {
  LinearConstraint total{{}, Relation::kEqual, 1};
  for (Eigen::Index v = 0; v < catalog.size(); ++v) {
    const std::string name = var_name(prefix, v);
    sys.variables.push_back(name);
    sys.assertions.push_back({{LinearConstraint{{{name, 1}}, Relation::kGreaterEqual, 0}}});
    total.terms.emplace_back(name, 1);
  }
  sys.assertions.push_back({{total}});
}

void add_equal_class_masses(ConstraintSystem& sys, const Catalog& catalog) {
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    LinearConstraint eq{{}, Relation::kEqual, 0};
    for (Eigen::Index v : catalog.members(c)) eq.terms.emplace_back(var_name('x', v), 1);
    for (Eigen::Index v : catalog.members(c)) eq.terms.emplace_back(var_name('y', v), -1);
    sys.assertions.push_back({{eq}});
  }
}

// M(x) − M(y) > margin  or  M(x) − M(y) < −margin
Assertion metric_gap(const RationalVector& score, const Rational& margin) {
  LinearConstraint diff{{}, Relation::kGreater, margin};
  for (Eigen::Index v = 0; v < score.size(); ++v) {
    if (score[v] != 0) diff.terms.emplace_back(var_name('x', v), score[v]);
  }
  for (Eigen::Index v = 0; v < score.size(); ++v) {
    if (score[v] != 0) diff.terms.emplace_back(var_name('y', v), -score[v]);
  }
  LinearConstraint below = diff;
  below.relation = Relation::kLess;
  below.rhs = -margin;
  return {{diff, below}};
}

// Largest within-class spread of a score vector, with the pair realizing it.
struct Spread {
  Rational gap = 0;
  Eigen::Index hi = -1;
  Eigen::Index lo = -1;
};

Spread widest_spread(const Catalog& catalog, const RationalVector& score) {
  Spread best;
  for (Eigen::Index c = 0; c < catalog.num_classes(); ++c) {
    Eigen::Index hi = catalog.members(c).front(), lo = hi;
    for (Eigen::Index v : catalog.members(c)) {
      if (score[v] > score[hi]) hi = v;
      if (score[v] < score[lo]) lo = v;
    }
    if (best.hi < 0 || score[hi] - score[lo] > best.gap) best = {score[hi] - score[lo], hi, lo};
  }
  return best;
}

std::map<std::string, Rational> point_mass_assignment(const Catalog& catalog, char prefix, Eigen::Index at) {
  std::map<std::string, Rational> out;
  for (Eigen::Index v = 0; v < catalog.size(); ++v) out[var_name(prefix, v)] = v == at ? 1 : 0;
  return out;
}

}  // namespace

SmtQuery emit_smt(const Catalog& catalog, SmtProperty property, const Rational& alpha,
                  std::string_view catalog_name) {
  require_valid(catalog);
  SmtQuery q;
  q.property = property;
  q.name = std::string(catalog_name) + "__" + std::string(to_string(property));
  const RationalVector envelope = envelope_lift(catalog).values;

  std::vector<std::string> comments{
      "catalog: " + std::string(catalog_name),
      "property: " + std::string(to_string(property)),
      "variants: " + std::to_string(catalog.size()) + ", classes: " + std::to_string(catalog.num_classes()),
  };
  for (Eigen::Index v = 0; v < catalog.size(); ++v) {
    comments.push_back(var_name('x', v) + " = " + catalog.variants()[v].id);
  }

  switch (property) {
    case SmtProperty::kEnvelopeInvariance:
    case SmtProperty::kFragilityWitness: {
      const bool fragile = property == SmtProperty::kFragilityWitness;
      const RationalVector& score = fragile ? catalog.scores() : envelope;
      const Rational margin = fragile ? kFragilityMargin : Rational(0);
      add_simplex(q.system, catalog, 'x');
      add_simplex(q.system, catalog, 'y');
      add_equal_class_masses(q.system, catalog);
      q.system.assertions.push_back(metric_gap(score, margin));
      const Spread spread = widest_spread(catalog, score);
      if (spread.gap > margin) {
        q.expected_verdict = Verdict::kSat;
        q.witness = point_mass_assignment(catalog, 'x', spread.hi);
        q.witness.merge(point_mass_assignment(catalog, 'y', spread.lo));
      } else {
        q.expected_verdict = Verdict::kUnsat;
      }
      comments.push_back(fragile ? "gap margin: " + to_exact_string(margin) : "gap margin: 0 (strict)");
      break;
    }
    case SmtProperty::kCertification: {
      if (alpha <= 0) throw std::invalid_argument("certification query needs alpha > 0");
      add_simplex(q.system, catalog, 'x');
      const RationalVector audited = catalog.audited_harm();
      // alpha·Ĥ(x) − M_Env(x) > 0
      LinearConstraint excess{{}, Relation::kGreater, 0};
      Eigen::Index best = 0;
      Rational best_value;
      for (Eigen::Index v = 0; v < catalog.size(); ++v) {
        const Rational coeff = alpha * audited[v] - envelope[v];
        if (coeff != 0) excess.terms.emplace_back(var_name('x', v), coeff);
        if (v == 0 || coeff > best_value) {
          best = v;
          best_value = coeff;
        }
      }
      q.system.assertions.push_back({{excess}});
      if (best_value > 0) {
        q.expected_verdict = Verdict::kSat;
        q.witness = point_mass_assignment(catalog, 'x', best);
      } else {
        q.expected_verdict = Verdict::kUnsat;
      }
      comments.push_back("alpha: " + to_exact_string(alpha));
      break;
    }
  }
  q.text = render_smt(q.system, comments, to_string(q.expected_verdict));
  return q;
}

namespace {

std::string render_sum(const std::vector<std::pair<std::string, Rational>>& terms) {
  if (terms.empty()) return "0";
  auto term = [](const std::pair<std::string, Rational>& t) {
    return t.second == 1 ? t.first : "(* " + to_smt_constant(t.second) + " " + t.first + ")";
  };
  if (terms.size() == 1) return term(terms.front());
  std::string out = "(+";
  for (const auto& t : terms) out += " " + term(t);
  return out + ")";
}

std::string render_constraint(const LinearConstraint& c) {
  return "(" + std::string(relation_symbol(c.relation)) + " " + render_sum(c.terms) + " " +
         to_smt_constant(c.rhs) + ")";
}

}  // namespace

std::string render_smt(const ConstraintSystem& system, const std::vector<std::string>& comments,
                       std::string_view status) {
  std::ostringstream out;
  for (const auto& line : comments) out << "; " << line << "\n";
  out << "(set-info :smt-lib-version 2.6)\n";
  if (status == "sat" || status == "unsat") out << "(set-info :status " << status << ")\n";
  out << "(set-logic " << system.logic << ")\n";
  for (const auto& v : system.variables) out << "(declare-fun " << v << " () Real)\n";
  for (const Assertion& a : system.assertions) {
    if (a.disjuncts.size() == 1) {
      out << "(assert " << render_constraint(a.disjuncts.front()) << ")\n";
    } else {
      out << "(assert (or";
      for (const auto& d : a.disjuncts) out << " " << render_constraint(d);
      out << "))\n";
    }
  }
  out << "(check-sat)\n(exit)\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Sexp {
  std::string atom;  // empty for lists
  std::vector<Sexp> items;
  bool is_atom() const { return !atom.empty(); }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  Sexp read() {
    skip();
    if (pos_ >= text_.size()) throw std::invalid_argument("unexpected end of SMT text");
    if (text_[pos_] == '(') {
      ++pos_;
      Sexp list;
      while (true) {
        skip();
        if (pos_ >= text_.size()) throw std::invalid_argument("unbalanced parentheses");
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    if (text_[pos_] == ')') throw std::invalid_argument("unexpected ')'");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';') {
      ++pos_;
    }
    return Sexp{std::string(text_.substr(start, pos_ - start)), {}};
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_number(const std::string& atom) {
  return !atom.empty() && (std::isdigit(static_cast<unsigned char>(atom.front())) || atom.front() == '.');
}

// Linear expression: coefficients per variable plus a constant.
struct Affine {
  std::map<std::string, Rational> coeff;
  Rational constant = 0;

  bool is_constant() const {
    return std::all_of(coeff.begin(), coeff.end(), [](const auto& kv) { return kv.second == 0; });
  }
  Affine& scale(const Rational& k) {
    for (auto& [v, c] : coeff) c *= k;
    constant *= k;
    return *this;
  }
  Affine& add(const Affine& other, const Rational& k = 1) {
    for (const auto& [v, c] : other.coeff) coeff[v] += k * c;
    constant += k * other.constant;
    return *this;
  }
};

Affine to_affine(const Sexp& e, const std::vector<std::string>& vars) {
  if (e.is_atom()) {
    Affine out;
    if (is_number(e.atom)) {
      out.constant = parse_rational(e.atom);
    } else if (std::find(vars.begin(), vars.end(), e.atom) != vars.end()) {
      out.coeff[e.atom] = 1;
    } else {
      throw std::invalid_argument("undeclared symbol " + e.atom);
    }
    return out;
  }
  if (e.items.empty() || !e.items.front().is_atom()) throw std::invalid_argument("malformed term");
  const std::string& op = e.items.front().atom;
  const std::size_t argc = e.items.size() - 1;
  Affine out;
  if (op == "+") {
    for (std::size_t i = 1; i <= argc; ++i) out.add(to_affine(e.items[i], vars));
  } else if (op == "-") {
    if (argc == 0) throw std::invalid_argument("'-' needs arguments");
    out = to_affine(e.items[1], vars);
    if (argc == 1) return out.scale(-1);
    for (std::size_t i = 2; i <= argc; ++i) out.add(to_affine(e.items[i], vars), -1);
  } else if (op == "*") {
    out.constant = 1;
    bool have_var = false;
    for (std::size_t i = 1; i <= argc; ++i) {
      Affine f = to_affine(e.items[i], vars);
      if (f.is_constant()) {
        out.scale(f.constant);
      } else if (!have_var && out.is_constant()) {
        const Rational k = out.constant;
        out = f.scale(k);
        have_var = true;
      } else {
        throw std::invalid_argument("nonlinear product");
      }
    }
  } else if (op == "/") {
    if (argc != 2) throw std::invalid_argument("'/' takes two arguments");
    Affine num = to_affine(e.items[1], vars);
    Affine den = to_affine(e.items[2], vars);
    if (!den.is_constant() || den.constant == 0) throw std::invalid_argument("division by a non-constant");
    out = num.scale(1 / den.constant);
  } else {
    throw std::invalid_argument("unsupported operator " + op);
  }
  return out;
}

LinearConstraint to_constraint(const Sexp& e, const std::vector<std::string>& vars) {
  if (e.is_atom() || e.items.size() != 3 || !e.items.front().is_atom()) {
    throw std::invalid_argument("expected a binary comparison");
  }
  const std::string& op = e.items.front().atom;
  LinearConstraint out;
  if (op == "<") {
    out.relation = Relation::kLess;
  } else if (op == "<=") {
    out.relation = Relation::kLessEqual;
  } else if (op == "=") {
    out.relation = Relation::kEqual;
  } else if (op == ">=") {
    out.relation = Relation::kGreaterEqual;
  } else if (op == ">") {
    out.relation = Relation::kGreater;
  } else {
    throw std::invalid_argument("unsupported relation " + op);
  }
  Affine diff = to_affine(e.items[1], vars);
  diff.add(to_affine(e.items[2], vars), -1);
  for (const auto& [v, c] : diff.coeff) {
    if (c != 0) out.terms.emplace_back(v, c);
  }
  out.rhs = -diff.constant;
  return out;
}

void collect_assertions(const Sexp& e, const std::vector<std::string>& vars, std::vector<Assertion>& out) {
  if (!e.is_atom() && !e.items.empty() && e.items.front().atom == "and") {
    for (std::size_t i = 1; i < e.items.size(); ++i) collect_assertions(e.items[i], vars, out);
    return;
  }
  Assertion a;
  if (!e.is_atom() && !e.items.empty() && e.items.front().atom == "or") {
    for (std::size_t i = 1; i < e.items.size(); ++i) a.disjuncts.push_back(to_constraint(e.items[i], vars));
  } else {
    a.disjuncts.push_back(to_constraint(e, vars));
  }
  out.push_back(std::move(a));
}

}  // namespace

ConstraintSystem parse_smt(std::string_view text) {
  ConstraintSystem out;
  out.logic.clear();
  Reader reader(text);
  bool checked = false;
  while (!reader.at_end()) {
    const Sexp cmd = reader.read();
    if (cmd.is_atom() || cmd.items.empty() || !cmd.items.front().is_atom()) {
      throw std::invalid_argument("expected a command");
    }
    const std::string& head = cmd.items.front().atom;
    if (head == "set-info" || head == "set-option" || head == "exit") continue;
    if (head == "set-logic") {
      if (cmd.items.size() != 2) throw std::invalid_argument("malformed set-logic");
      out.logic = cmd.items[1].atom;
    } else if (head == "declare-fun" || head == "declare-const") {
      const bool fun = head == "declare-fun";
      const std::size_t sort_at = fun ? 3 : 2;
      if (cmd.items.size() != sort_at + 1 || (fun && !cmd.items[2].items.empty()) ||
          cmd.items[sort_at].atom != "Real") {
        throw std::invalid_argument("only nullary Real declarations are supported");
      }
      out.variables.push_back(cmd.items[1].atom);
    } else if (head == "assert") {
      if (cmd.items.size() != 2) throw std::invalid_argument("malformed assert");
      collect_assertions(cmd.items[1], out.variables, out.assertions);
    } else if (head == "check-sat") {
      checked = true;
    } else {
      throw std::invalid_argument("unsupported command " + head);
    }
  }
  if (!checked) throw std::invalid_argument("script has no check-sat");
  return out;
}

}  // namespace semaudit
