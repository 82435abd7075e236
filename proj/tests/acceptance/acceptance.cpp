// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "../test_support.hpp"
#include "gluing/gluing.hpp"

#ifndef GLUING_CLI
#error "GLUING_CLI must name the command-line binary"
#endif

using namespace gluing;
using testing_support::load_scene;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string format(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

int failures = 0;

void criterion(int n, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.ok = false;
    o.detail += format("; over time budget %.0f s", budget_s);
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", n, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

Vec2 uniform_in_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), u(rng)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 1 ------------------------------------------------------------------------
Outcome kernel_exactness() {
  const double equi = comparison_angle(0.0, 1, 1, 1);
  const double cone = cone_distance(0.0, 3, kPi / 2, 4);
  double worst = 0.0;
  int cases = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k) {
        const double a = 0.1 + 1.9 * i / 9, b = 0.1 + 1.9 * j / 9, c = 0.1 + 1.9 * k / 9;
        const auto t = TriangleSides::make(a, b, c);
        if (!t) continue;
        ++cases;
        const double flat = comparison_angle(0.0, *t);
        for (double kappa : {-1e-4, -1e-5, -1e-8, 1e-8, 1e-5, 1e-4})
          worst = std::fmax(worst, std::abs(comparison_angle(kappa, *t) - flat));
      }
  const bool ok = std::abs(equi - kPi / 3) <= 1e-12 && std::abs(cone - 5.0) <= 1e-12 && worst <= 1e-6;
  return {ok, format("angle(1,1,1)-pi/3=%.1e cone-5=%.1e continuity worst=%.2e over %d triangles", equi - kPi / 3,
                     cone - 5.0, worst, cases)};
}

// 2 ------------------------------------------------------------------------
Outcome predistance_laws() {
  const DiscretizedComplex dc(load_scene("pillowcase").spec, 0.01);
  std::mt19937_64 rng(2);
  int monotone_breaks = 0, unstable = 0;
  for (int i = 0; i < 100; ++i) {
    const PiecePoint x{static_cast<int>(rng() % 2), uniform_in_unit(rng)};
    const PiecePoint y{static_cast<int>(rng() % 2), uniform_in_unit(rng)};
    double prev = kInfinity;
    for (int m = 0; m <= 8; ++m) {
      const double v = dc.predistance(x, y, m);
      if (v > prev) ++monotone_breaks;
      prev = v;
    }
    if (std::abs(prev - dc.distance(x, y).value) > 1e-12) ++unstable;
  }
  // |xz|_m + |zy|_l >= |xy|_{m+l} for z off E; one more crossing when z is a class of E.
  int splice_breaks = 0;
  std::uniform_int_distribution<int> hop(0, 4);
  for (int i = 0; i < 100; ++i) {
    const PiecePoint x{static_cast<int>(rng() % 2), uniform_in_unit(rng)};
    const PiecePoint y{static_cast<int>(rng() % 2), uniform_in_unit(rng)};
    const int m = hop(rng), l = hop(rng);
    const QueryPoint qx = dc.locate(x), qy = dc.locate(y);
    const bool on_e = i % 2 == 1;
    const QueryPoint qz = on_e ? dc.node_query(static_cast<int>(rng() % dc.node_count()))
                               : dc.locate({static_cast<int>(rng() % 2), uniform_in_unit(rng)});
    const double lhs = dc.predistance(qx, qz, m) + dc.predistance(qz, qy, l);
    const double rhs = dc.predistance(qx, qy, m + l + (on_e ? 1 : 0));
    if (lhs < rhs - 1e-12) ++splice_breaks;
  }
  return {monotone_breaks == 0 && unstable == 0 && splice_breaks == 0,
          format("monotonicity breaks=%d, not stable at m=8: %d, splicing breaks=%d", monotone_breaks, unstable,
                 splice_breaks)};
}

// 3 ------------------------------------------------------------------------
Outcome distance_oracle() {
  const double h = 0.005;
  const DiscretizedComplex dc(load_scene("pillowcase").spec, h);
  const Measured centers = dc.distance(PiecePoint{0, {0.5, 0.5}}, PiecePoint{1, {0.5, 0.5}});
  const Measured corners = dc.distance(PiecePoint{0, {0, 0}}, PiecePoint{1, {1, 1}});
  const double oc = testing_support::pillowcase_distance({0.5, 0.5}, 0, {0.5, 0.5}, 1, h / 10);
  const double ok_ = testing_support::pillowcase_distance({0, 0}, 0, {1, 1}, 1, h / 10);
  const bool ok = std::abs(centers.value - 1.0) <= 2 * h && std::abs(oc - 1.0) <= 2 * h &&
                  std::abs(centers.value - oc) <= centers.error_bound &&
                  std::abs(corners.value - std::sqrt(2.0)) <= corners.error_bound &&
                  std::abs(corners.value - ok_) <= corners.error_bound;
  return {ok, format("center=%.9f (oracle %.9f, err %.3g) corner=%.9f (oracle %.9f, err %.3g)", centers.value, oc,
                     centers.error_bound, corners.value, ok_, corners.error_bound)};
}

// 4 ------------------------------------------------------------------------
Outcome positive_corpus() {
  std::string detail;
  bool ok = true;
  for (const char* name :
       {"annulus", "mobius", "paper_cup", "pillowcase", "sphere_sigma", "projective_tau", "double_square"}) {
    const Scene s = load_scene(name);
    VerifierConfig c = s.config;
    c.sample_count = 10000;
    c.h_schedule = {0.02, 0.01, 0.005};
    const VerifyReport r = verify(s.spec, c);
    ok = ok && r.certificates.empty() && s.spec.kappa.kappa == 0.0;
    detail += format("%s%s:%zu/%d", detail.empty() ? "" : " ", name, r.certificates.size(), r.tested);
  }
  return {ok, "certificates/tested " + detail};
}

// 5 ------------------------------------------------------------------------
Outcome torn_envelope() {
  const Scene s = load_scene("torn_envelope");
  const ComplexSpec& spec = s.spec;
  const LinkSpace link = build_link(spec, 0, {3, 0});
  const LinkVerdict judged = classify_and_judge(link);
  const bool link_ok = link.kind == LinkKind::Interval && std::abs(link.length - 2 * kPi) <= 1e-12 && !judged.ok;

  DiscretizationCache cache(spec);
  const VerifyReport r = verify(cache, s.config);
  const DiscretizedComplex& fine = cache.at(s.config.h_schedule.back());
  int link_certs = 0, persistent = 0;
  double nearest = kInfinity;
  for (const ViolationCertificate& c : r.certificates) {
    if (c.kind == CertificateKind::Link) ++link_certs;
    if ((c.kind == CertificateKind::Quadruple || c.kind == CertificateKind::Monotonicity) &&
        c.history.size() == s.config.h_schedule.size()) {
      ++persistent;
      nearest = std::fmin(nearest, fine.distance(c.points.front(), PiecePoint{0, {3, 0}}).value);
    }
  }
  const bool ok = link_ok && link_certs >= 1 && persistent >= 1 && nearest <= 1.0;
  return {ok, format("link %s length=%.10f judge=%s; link certificates=%d, persistent comparison certificates=%d "
                     "(closest apex %.3g from the torn class)",
                     to_string(link.kind), link.length, judged.ok ? "ok" : "violation", link_certs, persistent,
                     nearest)};
}

// 6 ------------------------------------------------------------------------
Outcome circle_3pi() {
  const DiscretizedComplex dc(load_scene("circle_3pi").spec, 0.01);
  const DiameterResult d = diameter_check(dc, 1.0);
  const bool ok = d.verdict == Verdict::Fail && std::abs(d.estimate - 1.5 * kPi) <= 0.01 &&
                  d.estimate - d.error_bound > kPi;
  return {ok, format("diameter=%.6f (3pi/2=%.6f) error_bound=%.3g bound=%.6f", d.estimate, 1.5 * kPi, d.error_bound,
                     d.bound)};
}

// 7 ------------------------------------------------------------------------
Outcome z3_disk() {
  const ComplexSpec spec = load_scene("z3_disk").spec;
  const bool warned = validate(spec).warning_codes().count("THEOREM_HYPOTHESIS_VIOLATED") == 1;
  const DiscretizedComplex dc(spec, 0.05);
  const Piece& disk = spec.pieces[0];
  bool found = false, ok = false;
  std::string edges;
  for (const LinkSite& site : link_sites(dc)) {
    bool vertex = false;
    for (const Vec2& v : disk.vertices) vertex = vertex || dist(v, site.point) <= 1e-9;
    if (vertex) continue;
    found = true;
    const LinkSpace l = build_link(spec, site.piece, site.point);
    ok = l.kind == LinkKind::Graph && l.graph_nodes == 2 && l.graph_edges == 3 && l.graph_edge_lengths.size() == 3;
    for (double e : l.graph_edge_lengths) {
      ok = ok && std::abs(e - kPi) <= 0.01;
      edges += format("%s%.6f", edges.empty() ? "" : ",", e);
    }
    break;
  }
  return {warned && found && ok, format("THEOREM_HYPOTHESIS_VIOLATED %s; side-interior class link: graph edges=[%s]",
                                        warned ? "reported" : "missing", edges.c_str())};
}

// 8 ------------------------------------------------------------------------
Outcome quasigeodesics() {
  const double h = 0.005;
  const char* names[] = {"annulus", "mobius", "paper_cup", "pillowcase", "sphere_sigma", "projective_tau",
                         "double_square"};
  const int quota[] = {15, 15, 14, 14, 14, 14, 14};
  int paths = 0, mono_fail = 0, mono_checks = 0, anti_checks = 0, anti_fail = 0, singular = 0;
  double worst_anti = -kInfinity;
  for (int s = 0; s < 7; ++s) {
    const ComplexSpec spec = load_scene(names[s]).spec;
    const DiscretizedComplex dc(spec, h);
    std::mt19937_64 rng(800 + s);
    for (int got = 0, tries = 0; got < quota[s] && tries < 2000; ++tries) {
      const PiecePoint x = detail::random_point(spec, rng), y = detail::random_point(spec, rng);
      const GeodesicPath path = dc.shortest_path(x, y);
      if (path.crossings.empty() || path.total_length < 20 * h) continue;
      ++got;
      ++paths;
      for (int k = 0; k < 3; ++k) {
        const CurveCheckResult m = monotonicity_check(dc, 0.0, path, detail::random_point(spec, rng));
        if (m.verdict == Verdict::Skipped) continue;
        ++mono_checks;
        if (m.verdict == Verdict::Fail) ++mono_fail;
      }
      for (std::size_t c = 0; c + 1 < path.legs.size(); ++c) {
        const LinkSpace link = build_link(spec, path.legs[c].piece, path.legs[c].to);
        if (link.kind != LinkKind::Circle || std::abs(link.length - 2 * kPi) > 1e-9) {
          ++singular;
          continue;
        }
        const AntipodalResult a = antipodal_check(dc, path, static_cast<int>(c), link);
        if (a.verdict == Verdict::Skipped) continue;
        ++anti_checks;
        worst_anti = std::fmax(worst_anti, a.worst - a.tolerance);
        if (a.verdict == Verdict::Fail) ++anti_fail;
      }
    }
  }
  const bool ok = paths == 100 && mono_checks > 0 && anti_checks > 0 && mono_fail == 0 && anti_fail == 0;
  return {ok, format("paths=%d monotonicity %d/%d failed, antipodal %d/%d failed (max excess over tolerance %.3g), "
                     "crossings at singular classes skipped=%d",
                     paths, mono_fail, mono_checks, anti_fail, anti_checks, worst_anti, singular)};
}

// 9 ------------------------------------------------------------------------
Outcome liberman() {
  const double h = 0.01;
  int curves = 0, failed = 0, comparisons = 0;
  for (const char* name : {"double_square", "pillowcase"}) {
    const ComplexSpec spec = load_scene(name).spec;
    const DiscretizedComplex dc(spec, h);
    std::mt19937_64 rng(name[0] == 'd' ? 91 : 92);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
      ArcCurve curve;
      if (name[0] == 'd') {
        // sub-arcs of the closed rim no longer than half of it
        const double len = 0.3 + 1.7 * u(rng), t0 = (4.0 - len) * u(rng);
        curve = {0, t0, t0 + len};
      } else {
        const int arc = static_cast<int>(rng() % 8);
        const double t0 = 0.7 * u(rng);
        curve = {arc, t0, t0 + 0.3 + (0.7 - t0) * u(rng)};
      }
      std::vector<PiecePoint> ps;
      for (int k = 0; k < 100; ++k) ps.push_back(detail::random_point(spec, rng));
      const CurveCheckResult r = liberman_check(dc, 0.0, curve, ps);
      ++curves;
      comparisons += r.comparisons;
      if (r.verdict == Verdict::Fail) ++failed;
    }
  }
  return {curves == 20 && failed == 0 && comparisons > 0,
          format("curves=%d failed=%d comparisons=%d", curves, failed, comparisons)};
}

// 10 -----------------------------------------------------------------------
Outcome determinism() {
  const std::string scene = std::string(GLUING_SCENE_DIR) + "/torn_envelope.scene";
  const std::string a = "acceptance_verify_a.txt", b = "acceptance_verify_b.txt";
  const std::string cmd = std::string(GLUING_CLI) + " verify " + scene + " --samples 500 --seed 7 > ";
  const int ra = std::system((cmd + a).c_str()), rb = std::system((cmd + b).c_str());
  const std::string ta = slurp(a), tb = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());
  const bool ok = ra == rb && !ta.empty() && ta == tb;
  return {ok, format("exit statuses %d/%d, report sizes %zu/%zu bytes, identical=%s", ra, rb, ta.size(), tb.size(),
                     ta == tb ? "yes" : "no")};
}

}  // namespace

int main() {
  criterion(1, "kernel exactness", 1, kernel_exactness);
  criterion(2, "predistance laws", 30, predistance_laws);
  criterion(3, "distance oracle agreement", 60, distance_oracle);
  criterion(4, "positive corpus has no certificates", 600, positive_corpus);
  criterion(5, "torn envelope", 120, torn_envelope);
  criterion(6, "circle of length 3pi", 5, circle_3pi);
  criterion(7, "Z/3 disk", 5, z3_disk);
  criterion(8, "quasigeodesic properties", 300, quasigeodesics);
  criterion(9, "geodesics in E", 120, liberman);
  criterion(10, "determinism", 600, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
