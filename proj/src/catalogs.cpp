#include "semaudit/catalogs.hpp"

namespace semaudit {

namespace {

Rational dec(const char* text) { return parse_rational(text); }

void add_pair(std::vector<Variant>& out, const std::string& cls, const char* orig_score, const char* orig_utility,
              const char* manip_score, const char* manip_utility) {
  out.push_back({cls + "-orig", cls, 1, dec(orig_score), dec(orig_utility)});
  out.push_back({cls + "-manip", cls, 1, dec(manip_score), dec(manip_utility)});
}

}  // namespace

Catalog deterministic_catalog() {
  std::vector<Variant> v{
      {"B1", "B1", 0, dec("0.05"), dec("0.55")},
      {"B2", "B2", 0, dec("0.08"), dec("0.58")},
      {"B3", "B3", 0, dec("0.10"), dec("0.62")},
      {"B4", "B4", 0, dec("0.14"), dec("0.66")},
  };
  add_pair(v, "H1", "0.95", "0.78", "0.15", "0.82");
  add_pair(v, "H2", "0.85", "0.72", "0.10", "0.76");
  add_pair(v, "H3", "0.90", "0.70", "0.12", "0.74");
  const std::map<std::string, int> labels{{"B1", 0}, {"B2", 0}, {"B3", 0}, {"B4", 0},
                                          {"H1", 1}, {"H2", 1}, {"H3", 1}};
  return Catalog::from_variants(std::move(v), labels, labels);
}

Catalog six_variant_catalog() {
  std::vector<Variant> v{
      {"B1", "B1", 0, dec("0.05"), dec("0.55")},
      {"B3", "B3", 0, dec("0.10"), dec("0.62")},
  };
  add_pair(v, "H1", "0.95", "0.78", "0.15", "0.82");
  add_pair(v, "H2", "0.85", "0.72", "0.10", "0.76");
  const std::map<std::string, int> labels{{"B1", 0}, {"B3", 0}, {"H1", 1}, {"H2", 1}};
  return Catalog::from_variants(std::move(v), labels, labels);
}

ProtocolSpec six_variant_protocol(const Rational& threshold) {
  return {{
              {"H1-orig", "H1-manip", true, dec("0.95")},
              {"H2-orig", "H2-manip", true, dec("0.80")},
              {"B1", "B3", false, dec("0.99")},
          },
          threshold};
}

RelabeledCatalog six_variant_at(const Rational& threshold) {
  const Catalog base = six_variant_catalog();
  std::vector<std::string> ids;
  for (const auto& v : base.variants()) ids.push_back(v.id);
  return apply_partition(base, induce_partition(six_variant_protocol(threshold), ids));
}

Catalog hatecheck_catalog() {
  const std::vector<std::string> harmful{"threat_dir_h", "derog_neg_emote_h_racial", "derog_neg_emote_h_women"};
  const Rational top = dec("0.92");
  std::vector<Variant> v;
  std::map<std::string, int> labels;
  for (std::size_t c = 0; c < harmful.size(); ++c) {
    for (int i = 0; i < 3; ++i) {
      const Rational score = top * (1 - Rational(3, 10) * i);
      // Lower-scored cases pay more; later classes carry a small penalty.
      const Rational utility = dec("0.70") + dec("0.25") * (1 - score) - Rational(1, 100) * static_cast<long>(c);
      v.push_back({harmful[c] + "/v" + std::to_string(i + 1), harmful[c], 1, score, utility});
    }
    labels[harmful[c]] = 1;
  }
  v.push_back({"ident_neutral_nh/v1", "ident_neutral_nh", 0, dec("0.05"), dec("0.60")});
  labels["ident_neutral_nh"] = 0;
  return Catalog::from_variants(std::move(v), labels, labels);
}

}  // namespace semaudit
