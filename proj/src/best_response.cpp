#include "semaudit/best_response.hpp"

namespace semaudit {

BudgetedLP make_lp(const Catalog& catalog, ScoreKind kind, const Rational& budget) {
  return {make_score(catalog, kind), catalog.utilities(), budget};
}

}  // namespace semaudit
