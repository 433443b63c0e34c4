#include "semaudit/io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace semaudit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::map<std::string, std::size_t> header_index(const CsvRow& header) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < header.size(); ++i) out[header[i]] = i;
  return out;
}

std::size_t require_column(const std::map<std::string, std::size_t>& idx, const std::string& name) {
  auto it = idx.find(name);
  if (it == idx.end()) throw std::invalid_argument("missing CSV column '" + name + "'");
  return it->second;
}

const std::string& field(const CsvRow& row, std::size_t i, std::size_t line) {
  if (i >= row.size()) throw std::invalid_argument("short CSV row at data line " + std::to_string(line));
  return row[i];
}

int parse_binary(const std::string& text) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  // Out-of-range labels are kept so validate_catalog can report them.
  try {
    return std::stoi(text);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a 0/1 label, got '" + text + "'");
  }
}

bool parse_bool(const std::string& text) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + text + "'");
}

}  // namespace

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.find('"') != std::string::npos) throw std::invalid_argument("quoted CSV fields are not supported");
    CsvRow row;
    std::size_t start = 0;
    while (true) {
      const auto comma = t.find(',', start);
      row.push_back(trim(t.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string to_exact_decimal(const Rational& value) {
  Integer den = boost::multiprecision::denominator(value);
  int twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return to_exact_string(value);
  std::string out = to_fixed(value, std::max(twos, fives));
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return out;
}

std::string write_variants_csv(const Catalog& catalog, const std::vector<ScoreFunction>& extra) {
  std::ostringstream out;
  out << "id,class_id,latent_harm,score,utility";
  for (const auto& s : extra) out << "," << to_string(s.kind);
  out << "\n";
  for (Eigen::Index i = 0; i < catalog.size(); ++i) {
    const Variant& v = catalog.variants()[i];
    out << v.id << "," << v.class_id << "," << v.latent_harm << "," << to_exact_decimal(v.score) << ","
        << to_exact_decimal(v.utility);
    for (const auto& s : extra) out << "," << to_exact_decimal(s.values[i]);
    out << "\n";
  }
  return out.str();
}

std::string write_classes_csv(const Catalog& catalog) {
  std::ostringstream out;
  out << "class_id,audited_label,ideal_label\n";
  for (const auto& c : catalog.classes()) {
    out << c.id << "," << c.audited_label << ",";
    if (c.ideal_label) out << *c.ideal_label;
    out << "\n";
  }
  return out.str();
}

Catalog read_catalog(const std::string& variants_csv, const std::string& classes_csv) {
  const auto rows = parse_csv(variants_csv);
  if (rows.empty()) throw std::invalid_argument("variant table is empty");
  const auto idx = header_index(rows.front());
  const std::size_t c_id = require_column(idx, "id"), c_cls = require_column(idx, "class_id"),
                    c_harm = require_column(idx, "latent_harm"), c_score = require_column(idx, "score"),
                    c_util = require_column(idx, "utility");
  std::vector<Variant> variants;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    variants.push_back({field(row, c_id, r), field(row, c_cls, r), parse_binary(field(row, c_harm, r)),
                        parse_rational(field(row, c_score, r)), parse_rational(field(row, c_util, r))});
  }
  if (classes_csv.empty()) return Catalog::from_variants(std::move(variants));

  const auto crows = parse_csv(classes_csv);
  if (crows.empty()) throw std::invalid_argument("class table is empty");
  const auto cidx = header_index(crows.front());
  const std::size_t k_id = require_column(cidx, "class_id"), k_aud = require_column(cidx, "audited_label");
  const auto ideal_col = cidx.find("ideal_label");
  std::vector<SemanticClass> classes;
  for (std::size_t r = 1; r < crows.size(); ++r) {
    const CsvRow& row = crows[r];
    SemanticClass c{field(row, k_id, r), {}, parse_binary(field(row, k_aud, r)), std::nullopt};
    if (ideal_col != cidx.end() && ideal_col->second < row.size() && !row[ideal_col->second].empty()) {
      c.ideal_label = parse_binary(row[ideal_col->second]);
    }
    for (const auto& v : variants) {
      if (v.class_id == c.id) c.member_ids.push_back(v.id);
    }
    classes.push_back(std::move(c));
  }
  return Catalog(std::move(variants), std::move(classes));
}

std::vector<Edge> read_edges(const std::string& csv) {
  const auto rows = parse_csv(csv);
  if (rows.empty()) return {};
  const auto idx = header_index(rows.front());
  const std::size_t c_v = require_column(idx, "v"), c_u = require_column(idx, "u"),
                    c_ok = require_column(idx, "attribute_ok"), c_conf = require_column(idx, "confidence");
  std::vector<Edge> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    out.push_back({field(row, c_v, r), field(row, c_u, r), parse_bool(field(row, c_ok, r)),
                   parse_rational(field(row, c_conf, r))});
  }
  return out;
}

std::string write_edges_csv(const std::vector<Edge>& edges) {
  std::ostringstream out;
  out << "v,u,attribute_ok,confidence\n";
  for (const auto& e : edges) {
    out << e.v << "," << e.u << "," << (e.attribute_ok ? 1 : 0) << "," << to_exact_decimal(e.confidence) << "\n";
  }
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace semaudit
