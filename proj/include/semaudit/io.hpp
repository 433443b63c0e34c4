#ifndef SEMAUDIT_IO_HPP_
#define SEMAUDIT_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "semaudit/catalog.hpp"
#include "semaudit/metric.hpp"
#include "semaudit/protocol.hpp"

namespace semaudit {

// Minimal CSV: comma separated, no quoting, blank lines and '#' lines ignored.
using CsvRow = std::vector<std::string>;
std::vector<CsvRow> parse_csv(const std::string& text);

// Terminating decimals are written as decimals ("0.95"), everything else as
// an exact fraction ("4/17"). parse_rational reads both back exactly.
std::string to_exact_decimal(const Rational& value);

// Variant table: id,class_id,latent_harm,score,utility plus one column per
// extra score function, named after its kind.
std::string write_variants_csv(const Catalog& catalog, const std::vector<ScoreFunction>& extra = {});

// Class table: class_id,audited_label,ideal_label (ideal may be empty).
std::string write_classes_csv(const Catalog& catalog);

// Columns are located by header name; unknown columns are ignored. Throws
// std::invalid_argument on missing columns or malformed fields. Without a
// class table, classes come from the class_id column with audited labels
// taken from the members' latent harm.
Catalog read_catalog(const std::string& variants_csv, const std::string& classes_csv = {});

// Edge table: v,u,attribute_ok,confidence.
std::vector<Edge> read_edges(const std::string& csv);
std::string write_edges_csv(const std::vector<Edge>& edges);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace semaudit

#endif  // SEMAUDIT_IO_HPP_
