#include "semaudit/io.hpp"

#include <gtest/gtest.h>

#include "semaudit/catalogs.hpp"
#include "semaudit/generator.hpp"
#include "test_util.hpp"

namespace semaudit {
namespace {

using testing::R;

void expect_same(const Catalog& a, const Catalog& b) {
  ASSERT_EQ(a.size(), b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Variant &x = a.variants()[i], &y = b.variants()[i];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.class_id, y.class_id);
    EXPECT_EQ(x.latent_harm, y.latent_harm);
    EXPECT_EQ(x.score, y.score);
    EXPECT_EQ(x.utility, y.utility);
  }
  ASSERT_EQ(a.num_classes(), b.num_classes());
  for (Eigen::Index c = 0; c < a.num_classes(); ++c) {
    EXPECT_EQ(a.classes()[c].id, b.classes()[c].id);
    EXPECT_EQ(a.classes()[c].member_ids, b.classes()[c].member_ids);
    EXPECT_EQ(a.classes()[c].audited_label, b.classes()[c].audited_label);
    EXPECT_EQ(a.classes()[c].ideal_label, b.classes()[c].ideal_label);
  }
}

TEST(CatalogCsvTest, RoundTrip) {
  for (const Catalog& cat : {deterministic_catalog(), hatecheck_catalog(), sample_catalog({})}) {
    const Catalog back = read_catalog(write_variants_csv(cat), write_classes_csv(cat));
    expect_same(cat, back);
    EXPECT_EQ(write_variants_csv(back), write_variants_csv(cat));
  }
}

TEST(CatalogCsvTest, ExtraScoreColumnsAreIgnoredOnRead) {
  const Catalog cat = deterministic_catalog();
  const std::string csv = write_variants_csv(cat, {envelope_lift(cat), class_mean_lift(cat)});
  EXPECT_NE(csv.find("envelope"), std::string::npos);
  expect_same(cat, read_catalog(csv, write_classes_csv(cat)));
}

TEST(CatalogCsvTest, ReadsByHeaderAndDefaultsLabels) {
  const Catalog cat = read_catalog(
      "# comment\nutility,score,id,class_id,latent_harm\n\n0.5,0.95,a,A,1\n0.6,1/3,b,A,1\n0.7,0.05,c,C,0\n");
  ASSERT_EQ(cat.size(), 3);
  EXPECT_EQ(cat.variants()[1].score, Rational(1, 3));
  EXPECT_EQ(cat.classes()[0].audited_label, 1);
  EXPECT_EQ(cat.classes()[1].audited_label, 0);
  EXPECT_TRUE(validate_catalog(cat).empty());
}

TEST(CatalogCsvTest, RejectsMalformed) {
  EXPECT_THROW(read_catalog("id,class_id,score,utility\na,A,0.5,0.5\n"), std::invalid_argument);
  EXPECT_THROW(read_catalog("id,class_id,latent_harm,score,utility\na,A,1,zero,0.5\n"), std::invalid_argument);
  EXPECT_THROW(read_catalog("id,class_id,latent_harm,score,utility\na,A,1,0.5\n"), std::invalid_argument);
  EXPECT_THROW(read_catalog("id,class_id,latent_harm,score,utility\na,A,1,0.5,0.5\n", "class_id\nA\n"),
               std::invalid_argument);
}

TEST(EdgeCsvTest, RoundTrip) {
  const std::vector<Edge> edges = six_variant_protocol(R("0.7")).candidate_edges;
  const std::vector<Edge> back = read_edges(write_edges_csv(edges));
  ASSERT_EQ(back.size(), edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EXPECT_EQ(back[i].v, edges[i].v);
    EXPECT_EQ(back[i].u, edges[i].u);
    EXPECT_EQ(back[i].attribute_ok, edges[i].attribute_ok);
    EXPECT_EQ(back[i].confidence, edges[i].confidence);
  }
  EXPECT_THROW(read_edges("v,u,attribute_ok,confidence\na,b,maybe,0.5\n"), std::invalid_argument);
}

TEST(ExactDecimalTest, Rendering) {
  EXPECT_EQ(to_exact_decimal(R("0.95")), "0.95");
  EXPECT_EQ(to_exact_decimal(Rational(4, 17)), "4/17");
  EXPECT_EQ(to_exact_decimal(Rational(3)), "3");
  EXPECT_EQ(to_exact_decimal(Rational(-1, 8)), "-0.125");
  for (const Rational& r : {Rational(4, 17), R("0.0001"), Rational(-7, 3)}) {
    EXPECT_EQ(parse_rational(to_exact_decimal(r)), r);
  }
}

TEST(CsvTest, SkipsCommentsAndBlankLines) {
  const auto rows = parse_csv("a,b\n# skip\n\n1,2\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], (CsvRow{"1", "2"}));
}

}  // namespace
}  // namespace semaudit
