#include <cmath>

#include "gluing/complex.hpp"
#include "gluing/validate.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

using namespace gluing;
using testing_support::load_scene;
using testing_support::unit_square_spec;

TEST(Piece, SidesAndAngles) {
  const Piece p{"r", PieceKind::Polygon, {{0, 0}, {4, 0}, {4, 2}, {0, 2}}};
  EXPECT_EQ(p.side_count(), 4);
  EXPECT_DOUBLE_EQ(p.side(1).length, 2.0);
  EXPECT_DOUBLE_EQ(p.perimeter(), 12.0);
  EXPECT_NEAR(p.corner_angle(2), kPi / 2, 1e-15);
  EXPECT_TRUE(p.contains({4, 1}));
  EXPECT_FALSE(p.contains({4.1, 1}));
  const Piece s{"s", PieceKind::Segment, {{0, 0}, {2, 0}}};
  EXPECT_EQ(s.side_count(), 2);
  EXPECT_DOUBLE_EQ(s.perimeter(), 2.0);
}

TEST(Arc, ChartAndBreakpoints) {
  ComplexSpec s = unit_square_spec();
  s.arcs.push_back({"a", 0, {0, 1}, {}});
  EXPECT_DOUBLE_EQ(s.arc_length(0), 2.0);
  EXPECT_EQ(s.arc_breakpoints(0), (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(s.arc_point(0, 1.5), (Vec2{1, 0.5}));
  EXPECT_EQ(s.arc_germ_direction(0, 1.0, +1), (Vec2{0, 1}));
  EXPECT_EQ(s.arc_germ_direction(0, 1.0, -1), (Vec2{-1, -0}));
  const auto through = s.arcs_through(0, {1, 0});
  ASSERT_EQ(through.size(), 1u);
  EXPECT_DOUBLE_EQ(through[0].t, 1.0);
}

TEST(Arc, ClosedArcReportsBothEnds) {
  ComplexSpec s = unit_square_spec();
  s.arcs.push_back({"rim", 0, {0, 1, 2, 3}, {}});
  EXPECT_TRUE(s.arc_closed(0));
  const auto through = s.arcs_through(0, {0, 0});
  ASSERT_EQ(through.size(), 2u);
  EXPECT_DOUBLE_EQ(through[0].t, 0.0);
  EXPECT_DOUBLE_EQ(through[1].t, 4.0);
}

TEST(Gluing, ImagesAndGerms) {
  ComplexSpec s = unit_square_spec();
  s.arcs.push_back({"right", 0, {1}, {}});
  s.arcs.push_back({"left", 0, {3}, {}});
  s.gluings.push_back({"g", {{0, false}, {1, true}}, false});
  const auto img = s.glued_images({0, 0.25});
  ASSERT_EQ(img.size(), 1u);
  EXPECT_EQ(img[0].arc, 1);
  EXPECT_DOUBLE_EQ(img[0].t, 0.75);
  EXPECT_EQ(s.arc_point(1, 0.75), (Vec2{0, 0.25}));
  const auto germs = s.glued_germs({0, 0.25}, +1);
  EXPECT_EQ(germs[0].second, -1);  // opposite orientations flip the germ
}

TEST(Gluing, FoldImages) {
  ComplexSpec s = unit_square_spec();
  s.arcs.push_back({"rim", 0, {0, 1}, {}});
  s.gluings.push_back({"cup", {{0, false}}, true});
  const auto img = s.glued_images({0, 0.5});
  ASSERT_EQ(img.size(), 1u);
  EXPECT_DOUBLE_EQ(img[0].t, 1.5);
  EXPECT_EQ(s.glued_germs({0, 1.0}, +1)[0].second, -1);
}

TEST(Validate, PillowcaseIsValidWithoutWarnings) {
  const ValidationReport r = validate(load_scene("pillowcase").spec);
  EXPECT_EQ(r.status(), ValidationStatus::Valid);
  EXPECT_TRUE(r.warning_codes().empty());
  EXPECT_TRUE(r.has_code("SPADE_CONDITION"));
}

TEST(Validate, TornEnvelopeIsNotStructurallyExtremal) {
  const ValidationReport r = validate(load_scene("torn_envelope").spec);
  EXPECT_EQ(r.status(), ValidationStatus::ValidWithWarnings);
  EXPECT_EQ(r.warning_codes(), (std::set<std::string>{"NOT_STRUCTURALLY_EXTREMAL"}));
}

TEST(Validate, Z3ClassViolatesHypothesis) {
  const ValidationReport r = validate(load_scene("z3_disk").spec);
  EXPECT_EQ(r.status(), ValidationStatus::ValidWithWarnings);
  EXPECT_EQ(r.warning_codes(), (std::set<std::string>{"THEOREM_HYPOTHESIS_VIOLATED"}));
}

TEST(Validate, LengthMismatchIsAnError) {
  const ValidationReport r = validate(load_scene("length_mismatch").spec);
  EXPECT_EQ(r.status(), ValidationStatus::Invalid);
  EXPECT_TRUE(r.has_code("ARC_LENGTH_MISMATCH"));
}

TEST(Validate, StructuralErrors) {
  ComplexSpec nonconvex;
  nonconvex.pieces.push_back({"p", PieceKind::Polygon, {{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}});
  EXPECT_TRUE(validate(nonconvex).has_code("NONCONVEX_PIECE"));

  ComplexSpec clockwise;
  clockwise.pieces.push_back({"p", PieceKind::Polygon, {{0, 0}, {0, 1}, {1, 1}, {1, 0}}});
  EXPECT_EQ(validate(clockwise).status(), ValidationStatus::Invalid);

  ComplexSpec twice = unit_square_spec();
  twice.arcs.push_back({"a", 0, {0}, {}});
  twice.arcs.push_back({"b", 0, {2}, {}});
  twice.gluings.push_back({"g", {{0, false}, {1, false}}, false});
  twice.gluings.push_back({"h", {{0, false}}, true});
  EXPECT_TRUE(validate(twice).has_code("ARC_MULTIPLY_GLUED"));

  ComplexSpec overlap = unit_square_spec();
  overlap.arcs.push_back({"a", 0, {0, 1}, {}});
  overlap.arcs.push_back({"b", 0, {1}, {}});
  EXPECT_TRUE(validate(overlap).has_code("ARC_OVERLAP"));

  EXPECT_TRUE(validate(ComplexSpec{}).has_code("NO_PIECES"));
}

TEST(Validate, PositiveCurvatureHypotheses) {
  const ValidationReport r = validate(load_scene("circle_3pi").spec);
  EXPECT_TRUE(r.has_code("THEOREM_HYPOTHESIS_VIOLATED"));

  ComplexSpec big;
  big.kappa.kappa = 1.0;
  big.pieces.push_back({"s", PieceKind::Segment, {{0, 0}, {2, 0}}});
  EXPECT_TRUE(validate(big).has_code("NOT_KAPPA_EXTREMAL"));  // E empty, diameter 2 > pi / 2

  ComplexSpec small = big;
  small.pieces[0].vertices[1] = {1.5, 0};
  EXPECT_FALSE(validate(small).has_code("NOT_KAPPA_EXTREMAL"));
}

TEST(Validate, DeterministicAndIdempotent) {
  const ComplexSpec s = load_scene("torn_envelope").spec;
  const ValidationReport a = validate(s), b = validate(s);
  ASSERT_EQ(a.findings.size(), b.findings.size());
  for (std::size_t i = 0; i < a.findings.size(); ++i) {
    EXPECT_EQ(a.findings[i].code, b.findings[i].code);
    EXPECT_EQ(a.findings[i].message, b.findings[i].message);
    EXPECT_EQ(a.findings[i].location, b.findings[i].location);
  }
}

TEST(InducedArcDistance, Examples) {
  ComplexSpec s = unit_square_spec();
  s.arcs.push_back({"bottom", 0, {0}, {}});
  s.arcs.push_back({"right", 0, {1}, {}});
  EXPECT_NEAR(induced_arc_distance(s, {0, 0.2}, {0, 0.7}), 0.5, 1e-12);
  EXPECT_NEAR(induced_arc_distance(s, {0, 0.7}, {1, 0.3}), 0.6, 1e-12);

  ComplexSpec opposite = unit_square_spec();
  opposite.arcs.push_back({"bottom", 0, {0}, {}});
  opposite.arcs.push_back({"top", 0, {2}, {}});
  EXPECT_TRUE(std::isinf(induced_arc_distance(opposite, {0, 0.5}, {1, 0.5})));
  EXPECT_THROW(induced_arc_distance(opposite, {0, 1.5}, {1, 0.5}), std::domain_error);
}

TEST(InducedArcDistance, IsAMetricOnComponents) {
  const ComplexSpec s = load_scene("pillowcase").spec;
  const ArcComplex ec(s);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> arc(0, 3);  // the four arcs of the first square
  std::uniform_real_distribution<double> t(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const ArcPoint p{arc(rng), t(rng)}, q{arc(rng), t(rng)}, r{arc(rng), t(rng)};
    const double pq = ec.distance(p, q), qp = ec.distance(q, p);
    EXPECT_NEAR(pq, qp, 1e-12);
    EXPECT_LE(pq, ec.distance(p, r) + ec.distance(r, q) + 1e-12);
    EXPECT_NEAR(ec.distance(p, p), 0.0, 1e-15);
  }
}

TEST(GluingIsometry, Examples) {
  EXPECT_TRUE(gluing_isometry_check(load_scene("pillowcase").spec, 200).has_code("GLUING_ISOMETRIC"));
  EXPECT_TRUE(gluing_isometry_check(load_scene("paper_cup").spec, 200).has_code("GLUING_ISOMETRIC"));

  ComplexSpec s;
  s.pieces.push_back({"sq", PieceKind::Polygon, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
  s.pieces.push_back({"rect", PieceKind::Polygon, {{0, 0}, {1.5, 0}, {1.5, 1}, {0, 1}}});
  s.arcs.push_back({"a", 0, {0, 1, 2, 3}, {}});
  s.arcs.push_back({"b", 1, {0, 1, 2, 3}, {}});
  s.gluings.push_back({"g", {{0, false}, {1, false}}, false});
  const ValidationReport r = gluing_isometry_check(s, 200);
  EXPECT_TRUE(r.has_code("GLUING_NOT_ISOMETRIC"));
  EXPECT_EQ(r.status(), ValidationStatus::Invalid);
}
