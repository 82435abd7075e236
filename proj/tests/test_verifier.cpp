#include <cmath>
#include <random>

#include "gluing/verifier.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

using namespace gluing;
using testing_support::load_scene;

namespace {

ComplexSpec big_square() {
  ComplexSpec s;
  s.pieces.push_back({"sq", PieceKind::Polygon, {{0, 0}, {4, 0}, {4, 4}, {0, 4}}});
  return s;
}

// Euclidean angle at a between b and c.
double plane_angle(Vec2 a, Vec2 b, Vec2 c) {
  const double u = std::atan2(b.y - a.y, b.x - a.x), v = std::atan2(c.y - a.y, c.x - a.x);
  double d = std::abs(u - v);
  return d > kPi ? 2 * kPi - d : d;
}

Vec2 uniform_in(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng)};
}

}  // namespace

TEST(Splitmix, ReferenceValue) {
  EXPECT_EQ(detail::splitmix64(0), 0xe220a8397b1dcdafULL);
  std::mt19937_64 a = detail::sample_rng(7, 3), b = detail::sample_rng(7, 3);
  EXPECT_EQ(a(), b());
  std::mt19937_64 r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = detail::uniform01(r);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(QuadrupleTest, FlatPieceMatchesPlaneAngles) {
  const DiscretizedComplex dc(big_square(), 0.05);
  std::mt19937_64 rng(11);
  int tested = 0;
  for (int i = 0; i < 200; ++i) {
    const Quadruple q{{PiecePoint{0, uniform_in(rng, 0, 4)}, PiecePoint{0, uniform_in(rng, 0, 4)},
                       PiecePoint{0, uniform_in(rng, 0, 4)}, PiecePoint{0, uniform_in(rng, 0, 4)}}};
    const QuadrupleResult r = quadruple_test(dc, 0.0, q);
    if (r.verdict == Verdict::Skipped) continue;
    ++tested;
    const Vec2 a = q.points[0].pos, b = q.points[1].pos, c = q.points[2].pos, d = q.points[3].pos;
    EXPECT_NEAR(r.angles[0], plane_angle(a, b, c), 1e-9);
    EXPECT_NEAR(r.angles[1], plane_angle(a, c, d), 1e-9);
    EXPECT_NEAR(r.angles[2], plane_angle(a, d, b), 1e-9);
    EXPECT_LE(r.margin, 1e-9);
    EXPECT_EQ(r.verdict, Verdict::Pass);
  }
  EXPECT_GT(tested, 150);
}

TEST(QuadrupleTest, ApexInsideTriangleSumsToFullTurn) {
  const DiscretizedComplex dc(big_square(), 0.05);
  const QuadrupleResult r = quadruple_test(dc, 0.0, {{PiecePoint{0, {2, 2}}, {0, {3.5, 2}}, {0, {1, 3.5}}, {0, {1, 0.5}}}});
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.sum, 2 * kPi, 1e-12);
  EXPECT_NEAR(r.margin, 0.0, 1e-12);
}

TEST(QuadrupleTest, CoincidentPointsAreSkipped) {
  const DiscretizedComplex dc(big_square(), 0.05);
  const QuadrupleResult r = quadruple_test(dc, 0.0, {{PiecePoint{0, {2, 2}}, {0, {3, 3}}, {0, {3, 3}}, {0, {1, 1}}}});
  EXPECT_EQ(r.verdict, Verdict::Skipped);
}

TEST(QuadrupleTest, PillowcaseSeamPasses) {
  const DiscretizedComplex dc(load_scene("pillowcase").spec, 0.02);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PiecePoint apex{i % 2, {u(rng), 0.05 * u(rng)}};
    const Quadruple q{{apex, PiecePoint{0, uniform_in(rng, 0, 1)}, PiecePoint{1, uniform_in(rng, 0, 1)},
                       PiecePoint{static_cast<int>(rng() % 2), uniform_in(rng, 0, 1)}}};
    EXPECT_NE(quadruple_test(dc, 0.0, q).verdict, Verdict::Fail);
  }
}

TEST(Monotonicity, StraightChordPasses) {
  const DiscretizedComplex dc(big_square(), 0.02);
  const GeodesicPath path = dc.shortest_path(PiecePoint{0, {0.2, 0.3}}, PiecePoint{0, {3.7, 3.1}});
  ASSERT_EQ(path.legs.size(), 1u);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const CurveCheckResult r = monotonicity_check(dc, 0.0, path, {0, uniform_in(rng, 0, 4)});
    EXPECT_NE(r.verdict, Verdict::Fail);
    EXPECT_LE(r.margin, 1e-9);  // exact in the plane
  }
}

TEST(Monotonicity, SeamCrossingOnPillowcasePasses) {
  const DiscretizedComplex dc(load_scene("pillowcase").spec, 0.01);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    const GeodesicPath path = dc.shortest_path(PiecePoint{0, uniform_in(rng, 0.1, 0.9)}, PiecePoint{1, uniform_in(rng, 0.1, 0.9)});
    const CurveCheckResult r = monotonicity_check(dc, 0.0, path, {static_cast<int>(rng() % 2), uniform_in(rng, 0, 1)});
    EXPECT_NE(r.verdict, Verdict::Fail);
  }
}

TEST(Liberman, DoubleSquareBoundaryThroughACorner) {
  const DiscretizedComplex dc(load_scene("double_square").spec, 0.01);
  std::mt19937_64 rng(15);
  std::vector<PiecePoint> ps;
  for (int i = 0; i < 30; ++i) ps.push_back({static_cast<int>(rng() % 2), uniform_in(rng, 0, 1)});
  const CurveCheckResult r = liberman_check(dc, 0.0, {0, 0.2, 1.7}, ps);
  EXPECT_GT(r.comparisons, 0);
  EXPECT_NE(r.verdict, Verdict::Fail);
}

TEST(Liberman, PillowcaseEdge) {
  const DiscretizedComplex dc(load_scene("pillowcase").spec, 0.01);
  std::mt19937_64 rng(16);
  std::vector<PiecePoint> ps;
  for (int i = 0; i < 30; ++i) ps.push_back({static_cast<int>(rng() % 2), uniform_in(rng, 0, 1)});
  EXPECT_NE(liberman_check(dc, 0.0, {0, 0.0, 1.0}, ps).verdict, Verdict::Fail);
}

TEST(Liberman, RejectsCurvesThatAreNotShortestInE) {
  const DiscretizedComplex dc(load_scene("double_square").spec, 0.05);
  EXPECT_THROW(liberman_check(dc, 0.0, {0, 0.0, 3.0}, {{0, {0.5, 0.5}}}), std::invalid_argument);
}

TEST(Diameter, CircleOfLengthThreePi) {
  const DiscretizedComplex dc(load_scene("circle_3pi").spec, 0.01);
  const DiameterResult r = diameter_check(dc, 1.0);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_NEAR(r.estimate, 1.5 * kPi, 0.02);
  EXPECT_NEAR(r.bound, kPi, 1e-15);
}

TEST(Diameter, ShortCirclePassesAndFlatIsUnbounded) {
  const Scene s = parse_scene_text(
      "kappa 1\n"
      "piece u segment 0 0 1 0\n"
      "piece v segment 0 0 1 0\n"
      "arc u0 u sides 0\narc u1 u sides 1\narc v0 v sides 0\narc v1 v sides 1\n"
      "glue a u1 + v0 +\nglue b v1 + u0 +\n");
  const DiscretizedComplex dc(s.spec, 0.01);
  const DiameterResult r = diameter_check(dc, 1.0);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_NEAR(r.estimate, 1.0, 0.02);

  const DiameterResult flat = diameter_check(DiscretizedComplex(load_scene("annulus").spec, 0.1), 0.0);
  EXPECT_EQ(flat.verdict, Verdict::Pass);
  EXPECT_TRUE(std::isinf(flat.bound));
}

TEST(Antipodal, PillowcaseCrossingAndPerturbedControl) {
  const DiscretizedComplex dc(load_scene("pillowcase").spec, 0.01);
  const GeodesicPath path = dc.shortest_path(PiecePoint{0, {0.3, 0.4}}, PiecePoint{1, {0.6, 0.5}});
  ASSERT_EQ(path.legs.size(), 2u);
  const PathLeg& in = path.legs[0];
  const LinkSpace link = build_link(dc.spec(), in.piece, in.to);
  const AntipodalResult good = antipodal_check(dc, path, 0, link);
  EXPECT_EQ(good.verdict, Verdict::Pass);

  GeodesicPath bent = path;
  bent.legs[1].to = bent.legs[1].from + Vec2{0.3, 0.3};  // leaves the crossing at a kink
  const AntipodalResult bad = antipodal_check(dc, bent, 0, link);
  EXPECT_EQ(bad.verdict, Verdict::Fail);
  EXPECT_GT(bad.worst, 0.1);
}

TEST(Verify, PillowcaseFindsNothing) {
  VerifierConfig c;
  c.sample_count = 300;
  c.seed = 3;
  const VerifyReport r = verify(load_scene("pillowcase").spec, c);
  EXPECT_EQ(r.sampled, 300);
  EXPECT_EQ(r.tested + r.skipped, r.sampled + r.probes);
  EXPECT_TRUE(r.certificates.empty());
  EXPECT_FALSE(r.diameter.has_value());
}

TEST(Verify, DeterministicAcrossRunsAndWorkerCounts) {
  const ComplexSpec s = load_scene("mobius").spec;
  VerifierConfig c;
  c.sample_count = 200;
  c.seed = 5;
  const VerifyReport a = verify(s, c);
  c.workers = 1;
  const VerifyReport b = verify(s, c);
  EXPECT_EQ(a.tested, b.tested);
  EXPECT_EQ(a.skipped, b.skipped);
  EXPECT_EQ(a.raw_failures, b.raw_failures);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
}

TEST(Verify, ConfigurationErrors) {
  auto bad = [](auto tweak) {
    VerifierConfig c;
    tweak(c);
    return c;
  };
  EXPECT_THROW(bad([](VerifierConfig& c) { c.sample_count = -1; }).check(), std::invalid_argument);
  EXPECT_THROW(bad([](VerifierConfig& c) { c.h_schedule.clear(); }).check(), std::invalid_argument);
  EXPECT_THROW(bad([](VerifierConfig& c) { c.h_schedule = {0.01, 0.02}; }).check(), std::invalid_argument);
  EXPECT_THROW(bad([](VerifierConfig& c) { c.h_schedule = {0.0}; }).check(), std::invalid_argument);
  EXPECT_THROW(bad([](VerifierConfig& c) { c.angle_tolerance_factor = 0; }).check(), std::invalid_argument);
  EXPECT_THROW(bad([](VerifierConfig& c) { c.bias = 1.5; }).check(), std::invalid_argument);
  EXPECT_THROW(bad([](VerifierConfig& c) { c.focus_radius = -1.0; }).check(), std::invalid_argument);
  EXPECT_NO_THROW(VerifierConfig{}.check());
}
