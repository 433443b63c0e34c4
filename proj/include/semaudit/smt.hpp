#ifndef SEMAUDIT_SMT_HPP_
#define SEMAUDIT_SMT_HPP_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semaudit/catalog.hpp"
#include "semaudit/rational.hpp"

namespace semaudit {

enum class SmtProperty { kEnvelopeInvariance, kFragilityWitness, kCertification };

std::string_view to_string(SmtProperty property);
SmtProperty parse_smt_property(std::string_view name);

enum class Verdict { kSat, kUnsat, kUnknown, kTimeout, kUnknownOutput, kUnavailable, kError };

std::string_view to_string(Verdict verdict);

enum class Relation { kLess, kLessEqual, kEqual, kGreaterEqual, kGreater };

// Σ coeff·var  rel  rhs, with each variable at most once and no zero
// coefficients once canonical.
struct LinearConstraint {
  std::vector<std::pair<std::string, Rational>> terms;
  Relation relation = Relation::kEqual;
  Rational rhs;

  LinearConstraint canonical() const;
  bool holds(const std::map<std::string, Rational>& assignment) const;
  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

// One assert: a disjunction of linear constraints (usually just one).
struct Assertion {
  std::vector<LinearConstraint> disjuncts;
  friend bool operator==(const Assertion&, const Assertion&) = default;
};

// Quantifier-free linear real arithmetic problem over declared variables.
struct ConstraintSystem {
  std::string logic = "QF_LRA";
  std::vector<std::string> variables;
  std::vector<Assertion> assertions;

  ConstraintSystem canonical() const;
  bool satisfied_by(const std::map<std::string, Rational>& assignment) const;
  friend bool operator==(const ConstraintSystem&, const ConstraintSystem&) = default;
};

// Margin on the fragile metric gap, keeping the witness strictly separated.
inline const Rational kFragilityMargin{1, 100'000'000};

struct SmtQuery {
  SmtProperty property = SmtProperty::kCertification;
  std::string name;  // deterministic file stem "<catalog>__<property>"
  ConstraintSystem system;
  std::string text;
  Verdict expected_verdict = Verdict::kUnknown;
  // For expected SAT queries, an assignment that satisfies the system.
  std::map<std::string, Rational> witness;
};

// Emits one of the three query families for `catalog`:
//  * envelope invariance: x, y with equal class masses and M_Env(x) != M_Env(y)
//  * fragility witness:   same with the fragile metric and a gap above the margin
//  * certification:       x with alpha·Ĥ(x) > M_Env(x)
// The expected verdict is decided from catalog structure: the first two
// reduce to per-class score spreads, the third to a linear objective whose
// maximum over the simplex sits at a vertex.
SmtQuery emit_smt(const Catalog& catalog, SmtProperty property, const Rational& alpha,
                  std::string_view catalog_name = "catalog");

std::string render_smt(const ConstraintSystem& system, const std::vector<std::string>& comments = {},
                       std::string_view status = {});

// Reads back the command subset written by render_smt. Throws
// std::invalid_argument on anything outside it.
ConstraintSystem parse_smt(std::string_view text);

}  // namespace semaudit

#endif  // SEMAUDIT_SMT_HPP_
