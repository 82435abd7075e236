#pragma once

// Numerical refutation of a lower curvature bound on a glued space.
//
// Every check compares glued distances against the kappa-model plane and
// allows a tolerance propagated from the per-query distance error bounds.
// A raw failure only becomes a certificate if it persists at every spacing
// of the refinement schedule; a pass means "no violation found", not a proof.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gluing/comparison.hpp"
#include "gluing/glued_metric.hpp"
#include "gluing/link.hpp"
#include "gluing/parallel.hpp"

namespace gluing {

struct VerifierConfig {
  int sample_count = 1000;
  std::uint64_t seed = 1;
  std::vector<double> h_schedule{0.02, 0.01, 0.005};
  double angle_tolerance_factor = 4.0;
  double bias = 0.7;
  std::optional<double> focus_radius;
  bool link_probes = true;
  unsigned workers = 0;

  void check() const {
    if (sample_count < 0) throw std::invalid_argument("verifier: negative sample count");
    if (h_schedule.empty()) throw std::invalid_argument("verifier: empty spacing schedule");
    for (std::size_t i = 0; i < h_schedule.size(); ++i) {
      if (!(h_schedule[i] > 0.0)) throw std::invalid_argument("verifier: spacings must be positive");
      if (i > 0 && !(h_schedule[i] < h_schedule[i - 1]))
        throw std::invalid_argument("verifier: spacing schedule must be strictly decreasing");
    }
    if (!(angle_tolerance_factor > 0.0)) throw std::invalid_argument("verifier: tolerance factor must be positive");
    if (!(bias >= 0.0 && bias <= 1.0)) throw std::invalid_argument("verifier: bias must lie in [0, 1]");
    if (focus_radius && !(*focus_radius > 0.0)) throw std::invalid_argument("verifier: focus radius must be positive");
  }
};

enum class CertificateKind { Quadruple, Monotonicity, Liberman, Diameter, Link };

inline const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Quadruple:
      return "quadruple";
    case CertificateKind::Monotonicity:
      return "monotonicity";
    case CertificateKind::Liberman:
      return "liberman";
    case CertificateKind::Diameter:
      return "diameter";
    case CertificateKind::Link:
      return "link";
  }
  return "?";
}

struct RefinementStep {
  double h = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
};

struct ViolationCertificate {
  CertificateKind kind = CertificateKind::Quadruple;
  std::vector<PiecePoint> points;
  std::vector<double> distances;
  std::vector<double> angles;
  double value = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  std::vector<RefinementStep> history;
  std::string note;
};

enum class Verdict { Pass, Fail, Skipped };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Skipped:
      return "skipped";
  }
  return "?";
}

struct Quadruple {
  std::array<PiecePoint, 4> points;  // apex first
};

struct QuadrupleResult {
  Verdict verdict = Verdict::Skipped;
  double sum = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  std::array<double, 3> angles{};
  std::array<double, 6> distances{};  // ab ac ad bc bd cd
  std::array<double, 6> errors{};
};

// ---------------------------------------------------------------------------
// Random sampling. Each sample owns a generator seeded from (seed, index), so
// the sample set does not depend on scheduling.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed + splitmix64(index)));
}

inline Vec2 random_point_in_piece(const Piece& p, std::mt19937_64& rng) {
  if (p.kind == PieceKind::Segment) return lerp(p.vertices[0], p.vertices[1], uniform01(rng));
  // Fan triangulation of a convex polygon, area weighted.
  const std::size_t n = p.vertices.size();
  std::vector<double> acc;
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    total += 0.5 * std::abs(cross(p.vertices[i] - p.vertices[0], p.vertices[i + 1] - p.vertices[0]));
    acc.push_back(total);
  }
  const double r = uniform01(rng) * total;
  std::size_t k = std::lower_bound(acc.begin(), acc.end(), r) - acc.begin();
  k = std::min(k, acc.size() - 1);
  double u = uniform01(rng), v = uniform01(rng);
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  const Vec2 a = p.vertices[0], b = p.vertices[k + 1], c = p.vertices[k + 2];
  return a + (b - a) * u + (c - a) * v;
}

inline PiecePoint random_point(const ComplexSpec& spec, std::mt19937_64& rng) {
  std::vector<double> acc;
  double total = 0.0;
  for (const Piece& p : spec.pieces) {
    total += p.kind == PieceKind::Polygon ? polygon_area(p.vertices) : p.perimeter();
    acc.push_back(total);
  }
  const double r = uniform01(rng) * total;
  int k = static_cast<int>(std::lower_bound(acc.begin(), acc.end(), r) - acc.begin());
  k = std::min(k, static_cast<int>(spec.pieces.size()) - 1);
  return {k, random_point_in_piece(spec.pieces[k], rng)};
}

// A point of the piece within `radius` of `center`, by rejection.
inline PiecePoint random_point_near(const Piece& piece, int index, Vec2 center, double radius,
                                    std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    Vec2 offset;
    if (piece.kind == PieceKind::Segment) {
      offset = normalized(piece.vertices[1] - piece.vertices[0]) * ((2.0 * uniform01(rng) - 1.0) * radius);
    } else {
      const double r = radius * std::sqrt(uniform01(rng));
      const double th = 2.0 * kPi * uniform01(rng);
      offset = Vec2{r * std::cos(th), r * std::sin(th)};
    }
    if (piece.contains(center + offset, 0.0)) return {index, center + offset};
  }
  return {index, center};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quadruple condition.

namespace detail {

// Six distances of four points with the triangle inequality restored among
// them: transient points on E are not graph nodes, so paths through them are
// added by a closure step (every closed value is still a realizable length).
struct QuadDistances {
  std::array<std::array<double, 4>, 4> d{};
  std::array<std::array<double, 4>, 4> e{};
};

inline QuadDistances measure_four(const DiscretizedComplex& dc, const std::array<QueryPoint, 4>& q,
                                  std::array<std::optional<DistanceField>, 4>* fields = nullptr) {
  std::array<std::optional<DistanceField>, 4> local;
  auto& f = fields ? *fields : local;
  QuadDistances out;
  for (int i = 0; i < 4; ++i) {
    out.d[i][i] = 0.0;
    out.e[i][i] = 0.0;
    for (int j = i + 1; j < 4; ++j) {
      const bool swap = DiscretizedComplex::precedes(q[j], q[i]);
      const int src = swap ? j : i, dst = swap ? i : j;
      if (!f[src]) f[src] = dc.field(q[src]);
      const Measured m = dc.measure(*f[src], q[src], q[dst]);
      out.d[i][j] = out.d[j][i] = m.value;
      out.e[i][j] = out.e[j][i] = m.error_bound;
    }
  }
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (out.d[i][k] + out.d[k][j] < out.d[i][j]) {
          out.d[i][j] = out.d[i][k] + out.d[k][j];
          out.e[i][j] = out.e[i][k] + out.e[k][j];
        }
  return out;
}

inline QuadrupleResult judge_quadruple(const QuadDistances& qd, double kappa, double h, double factor) {
  QuadrupleResult r;
  const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  double min_d = kInfinity, max_d = 0.0, err = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double d = qd.d[pairs[k][0]][pairs[k][1]];
    r.distances[k] = d;
    r.errors[k] = qd.e[pairs[k][0]][pairs[k][1]];
    min_d = std::fmin(min_d, d);
    max_d = std::fmax(max_d, d);
    err += r.errors[k];
  }
  if (!std::isfinite(max_d) || min_d < 10.0 * h) return r;
  if (kappa > 0.0 && max_d >= Curvature{kappa}.diameter_bound() - 10.0 * h) return r;
  // Angles at the apex: bac, cad, dab.
  const double ab = r.distances[0], ac = r.distances[1], ad = r.distances[2];
  const double bc = r.distances[3], bd = r.distances[4], cd = r.distances[5];
  auto angle = [&](double opposite, double s1, double s2) {
    const auto t = TriangleSides::make(opposite, s1, s2);
    return t ? comparison_angle(kappa, *t) : comparison_angle(kappa, TriangleSides::make(std::fmin(opposite, s1 + s2), s1, s2).value());
  };
  r.angles = {angle(bc, ab, ac), angle(cd, ac, ad), angle(bd, ad, ab)};
  r.sum = r.angles[0] + r.angles[1] + r.angles[2];
  r.margin = r.sum - 2.0 * kPi;
  r.tolerance = factor * err / min_d;
  r.verdict = r.margin > r.tolerance ? Verdict::Fail : Verdict::Pass;
  return r;
}

}  // namespace detail

inline QuadrupleResult quadruple_test(const DiscretizedComplex& dc, double kappa, const Quadruple& quad,
                                      double angle_tolerance_factor = 4.0) {
  std::array<QueryPoint, 4> q;
  for (int i = 0; i < 4; ++i) q[i] = dc.locate(quad.points[i]);
  return detail::judge_quadruple(detail::measure_four(dc, q), kappa, dc.h(), angle_tolerance_factor);
}

// ---------------------------------------------------------------------------
// Quasigeodesic checks.

struct CurveCheckResult {
  Verdict verdict = Verdict::Skipped;
  int comparisons = 0;
  double margin = -kInfinity;  // worst violation amount (positive = violation)
  double tolerance = 0.0;      // tolerance at the worst comparison
  std::vector<double> witness;  // check specific parameters of the worst comparison

  void record(double m, double tol, std::vector<double> w) {
    ++comparisons;
    if (m - tol > margin - tolerance || comparisons == 1) {
      margin = m;
      tolerance = tol;
      witness = std::move(w);
    }
    if (m > tol) verdict = Verdict::Fail;
    else if (verdict == Verdict::Skipped) verdict = Verdict::Pass;
  }
};

// The comparison angle at gamma(t) between p and gamma(t + tau) must not grow
// with tau. Grid points closer than 10h are not compared.
inline CurveCheckResult monotonicity_check(const DiscretizedComplex& dc, double kappa, const GeodesicPath& path,
                                           PiecePoint p, double angle_tolerance_factor = 4.0, int grid = 24) {
  CurveCheckResult res;
  const double len = path.total_length;
  const double h = dc.h();
  const double dk = Curvature{kappa}.diameter_bound();
  const int n = std::max(1, std::min(grid, static_cast<int>(std::floor(len / (10.0 * h)))));
  if (len < 20.0 * h) return res;
  const QueryPoint qp = dc.locate(p);
  const DistanceField fp = dc.field(qp);
  std::vector<double> s(n + 1), d(n + 1), e(n + 1);
  for (int j = 0; j <= n; ++j) {
    s[j] = len * j / n;
    const QueryPoint qj = dc.locate(path.point_at(s[j]));
    const Measured m = DiscretizedComplex::precedes(qj, qp) ? dc.distance(qj, qp) : dc.measure(fp, qp, qj);
    d[j] = m.value;
    e[j] = m.error_bound;
  }
  for (int i = 0; i < n; ++i) {
    if (!(d[i] < dk) || d[i] < 10.0 * h) continue;
    double prev_angle = 0.0, prev_err = 0.0, prev_min = 0.0;
    bool have_prev = false;
    for (int j = i + 1; j <= n; ++j) {
      const double tau = s[j] - s[i];
      if (tau >= dk || !std::isfinite(d[j])) break;
      if (tau < 10.0 * h || d[j] < 10.0 * h) continue;
      const auto tri = TriangleSides::make(d[j], tau, d[i]);
      const double a = tri ? comparison_angle(kappa, *tri)
                           : comparison_angle(kappa, TriangleSides(std::fmin(d[j], tau + d[i]), tau, d[i]));
      const double err = e[i] + e[j];
      const double mn = std::fmin(tau, std::fmin(d[i], d[j]));
      if (have_prev) {
        const double tol = angle_tolerance_factor * (err + prev_err) / std::fmin(mn, prev_min);
        res.record(a - prev_angle, tol, {s[i], s[j - 1] - s[i], tau, prev_angle, a});
      }
      prev_angle = a;
      prev_err = err;
      prev_min = mn;
      have_prev = true;
    }
  }
  return res;
}

// A curve along one declared arc, by arclength parameters t0 < t1.
struct ArcCurve {
  int arc = -1;
  double t0 = 0.0;
  double t1 = 0.0;
  double length() const { return t1 - t0; }
  PiecePoint point_at(const ComplexSpec& spec, double s) const {
    return {spec.arcs.at(arc).piece, spec.arc_point(arc, t0 + s)};
  }
};

// Four-point comparison along a curve of E: with q1, q2, q3 on the curve and
// the model triangle (p~, q1~, q3~) built from |pq1|, |pq3| and t3 - t1, the
// point q2~ on q1~q3~ must satisfy |pq2| >= |p~q2~|.
inline CurveCheckResult liberman_check(const DiscretizedComplex& dc, double kappa, const ArcCurve& curve,
                                       const std::vector<PiecePoint>& ps, double angle_tolerance_factor = 4.0,
                                       int grid = 8) {
  const ComplexSpec& spec = dc.spec();
  const double len = curve.length();
  const double e_dist = ArcComplex(spec).distance({curve.arc, curve.t0}, {curve.arc, curve.t1});
  if (!(std::abs(e_dist - len) <= 1e-9 * std::fmax(1.0, len)))
    throw std::invalid_argument("liberman_check: the curve is not a shortest path in E");
  CurveCheckResult res;
  const double h = dc.h();
  const double dk = Curvature{kappa}.diameter_bound();
  const int n = std::max(2, std::min(grid, static_cast<int>(std::floor(len / (10.0 * h)))));
  if (len < 20.0 * h) return res;
  std::vector<QueryPoint> qs;
  std::vector<double> s;
  for (int j = 0; j <= n; ++j) {
    s.push_back(len * j / n);
    qs.push_back(dc.locate(curve.point_at(spec, s.back())));
  }
  for (const PiecePoint& pp : ps) {
    const QueryPoint qp = dc.locate(pp);
    const DistanceField fp = dc.field(qp);
    std::vector<double> d(n + 1), e(n + 1);
    for (int j = 0; j <= n; ++j) {
      const Measured m = DiscretizedComplex::precedes(qs[j], qp) ? dc.distance(qs[j], qp) : dc.measure(fp, qp, qs[j]);
      d[j] = m.value;
      e[j] = m.error_bound;
    }
    for (int i1 = 0; i1 <= n; ++i1)
      for (int i3 = i1 + 2; i3 <= n; ++i3) {
        const double span = s[i3] - s[i1];
        if (!(span <= d[i1] + d[i3] && d[i1] + d[i3] < 2.0 * dk - span)) continue;
        if (d[i1] < 10.0 * h || d[i3] < 10.0 * h) continue;
        const auto tri = TriangleSides::make(d[i3], d[i1], span);
        if (!tri) continue;
        const double alpha = comparison_angle(kappa, *tri);
        for (int i2 = i1 + 1; i2 < i3; ++i2) {
          const double model = model_side(kappa, d[i1], s[i2] - s[i1], alpha);
          const double tol = angle_tolerance_factor * (e[i1] + e[i2] + e[i3]);
          res.record(model - d[i2], tol, {s[i1], s[i2], s[i3], d[i2], model});
        }
      }
  }
  return res;
}

// At an interior crossing of a geodesic, incoming and outgoing directions are
// antipodal in the glued link: |xi zeta| + |eta zeta| = pi for every zeta.
struct AntipodalResult {
  Verdict verdict = Verdict::Skipped;
  double worst = 0.0;  // max | |xi zeta| + |eta zeta| - pi |
  double tolerance = 0.0;
  LinkDirection xi, eta;
};

inline AntipodalResult antipodal_check(const DiscretizedComplex& dc, const GeodesicPath& path, int crossing,
                                       const LinkSpace& link, double angle_tolerance_factor = 4.0,
                                       int zeta_samples = 64) {
  if (dc.spec().dimension() != 2) throw std::domain_error("antipodal_check: unsupported for 1D scenes");
  AntipodalResult res;
  if (crossing < 0 || crossing + 1 >= static_cast<int>(path.legs.size())) return res;
  const PathLeg& in = path.legs[crossing];
  const PathLeg& out = path.legs[crossing + 1];
  if (in.length() <= 0.0 || out.length() <= 0.0) return res;
  const auto xi = locate_direction(link, in.piece, in.to, in.from - in.to);
  const auto eta = locate_direction(link, out.piece, out.from, out.to - out.from);
  if (!xi || !eta) return res;
  res.xi = *xi;
  res.eta = *eta;
  const double h = dc.h();
  res.tolerance = angle_tolerance_factor * (h / in.length() + h / out.length());
  for (std::size_t s = 0; s < link.sectors.size(); ++s)
    for (int k = 0; k <= zeta_samples; ++k) {
      const LinkDirection z{static_cast<int>(s), link.sectors[s].angle * k / zeta_samples};
      const double dev = std::abs(link_distance(link, *xi, z) + link_distance(link, *eta, z) - kPi);
      res.worst = std::fmax(res.worst, dev);
    }
  res.verdict = res.worst <= res.tolerance ? Verdict::Pass : Verdict::Fail;
  return res;
}

// ---------------------------------------------------------------------------
// Diameter bound for kappa > 0.

struct DiameterResult {
  Verdict verdict = Verdict::Skipped;
  double estimate = 0.0;
  double error_bound = 0.0;
  double bound = kInfinity;
  PiecePoint from, to;
};

inline DiameterResult diameter_check(const DiscretizedComplex& dc, double kappa) {
  DiameterResult r;
  r.bound = Curvature{kappa}.diameter_bound();
  if (!(kappa > 0.0)) {
    r.verdict = Verdict::Pass;
    return r;
  }
  const ComplexSpec& spec = dc.spec();
  // Candidate points: all E samples, piece vertices, and samples along 1D pieces.
  std::vector<PiecePoint> pts;
  for (const NodeClass& nc : dc.nodes()) pts.push_back({nc.reps.front().piece, nc.reps.front().pos});
  for (std::size_t p = 0; p < spec.pieces.size(); ++p) {
    const Piece& pc = spec.pieces[p];
    for (const Vec2& v : pc.vertices) pts.push_back({static_cast<int>(p), v});
    if (pc.kind == PieceKind::Segment) {
      const int n = std::max(1, static_cast<int>(std::ceil(pc.perimeter() / dc.h())));
      for (int k = 1; k < n; ++k) pts.push_back({static_cast<int>(p), lerp(pc.vertices[0], pc.vertices[1], double(k) / n)});
    }
  }
  std::vector<QueryPoint> qs;
  for (const PiecePoint& pp : pts) qs.push_back(dc.locate(pp));
  std::vector<double> best(qs.size(), -1.0), best_err(qs.size(), 0.0);
  std::vector<int> best_to(qs.size(), -1);
  parallel_for(qs.size(), [&](std::size_t i) {
    const DistanceField f = dc.field(qs[i]);
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (j == i) continue;
      const Measured m = dc.measure(f, qs[i], qs[j]);
      if (std::isfinite(m.value) && m.value - m.error_bound > best[i] - best_err[i]) {
        best[i] = m.value;
        best_err[i] = m.error_bound;
        best_to[i] = static_cast<int>(j);
      }
    }
  });
  int arg = -1;
  for (std::size_t i = 0; i < qs.size(); ++i)
    if (best_to[i] >= 0 && (arg < 0 || best[i] - best_err[i] > best[arg] - best_err[arg])) arg = static_cast<int>(i);
  r.verdict = Verdict::Pass;
  if (arg < 0) return r;
  r.estimate = best[arg];
  r.error_bound = best_err[arg];
  r.from = pts[arg];
  r.to = pts[best_to[arg]];
  if (r.estimate - r.error_bound > r.bound) r.verdict = Verdict::Fail;
  return r;
}

// ---------------------------------------------------------------------------
// Driver.

struct LinkRecord {
  LinkSite site;
  LinkSpace link;
  LinkVerdict verdict;
};

struct VerifyReport {
  double kappa = 0.0;
  VerifierConfig config;
  int sampled = 0;
  int tested = 0;
  int skipped = 0;
  int raw_failures = 0;
  int probes = 0;
  double worst_margin = -kInfinity;  // max of (sum - 2 pi - tolerance) over tested quadruples
  std::optional<DiameterResult> diameter;
  std::vector<LinkRecord> links;
  std::vector<ViolationCertificate> certificates;
};

// Shares discretizations across the refinement schedule.
class DiscretizationCache {
 public:
  explicit DiscretizationCache(ComplexSpec spec) : spec_(std::move(spec)) {}
  const ComplexSpec& spec() const { return spec_; }
  const DiscretizedComplex& at(double h) {
    auto it = cache_.find(h);
    if (it == cache_.end()) it = cache_.emplace(h, std::make_unique<DiscretizedComplex>(spec_, h)).first;
    return *it->second;
  }
  void adopt(std::unique_ptr<DiscretizedComplex> dc) {
    const double h = dc->h();
    cache_.emplace(h, std::move(dc));
  }

 private:
  ComplexSpec spec_;
  std::map<double, std::unique_ptr<DiscretizedComplex>> cache_;
};

namespace detail {

// Three directions spread over the link, as (sector, offset) pairs.
inline std::vector<LinkDirection> probe_directions(const LinkSpace& link) {
  std::vector<double> at;
  std::size_t trail = 0;
  const double L = link.length;
  if (link.kind == LinkKind::Circle) {
    at = {0.0, L / 3.0, 2.0 * L / 3.0};
  } else if (link.kind == LinkKind::Interval) {
    const double delta = 0.05;
    at = {delta * L, 0.5 * L, (1.0 - delta) * L};
  }
  std::vector<LinkDirection> out;
  if (link.kind != LinkKind::Graph) {
    const auto& walk = link.trails.at(trail);
    for (double a : at) out.push_back(link.trail_direction(walk, a));
  } else {
    for (std::size_t k = 0; k < link.trails.size() && out.size() < 3; ++k) {
      double total = 0.0;
      for (const auto& [s, entry] : link.trails[k]) total += link.sectors[s].angle;
      out.push_back(link.trail_direction(link.trails[k], 0.5 * total));
    }
  }
  return out;
}

inline std::optional<Quadruple> probe_quadruple(const ComplexSpec& spec, const LinkSpace& link) {
  const auto dirs = probe_directions(link);
  if (dirs.size() < 3) return std::nullopt;
  double radius = 0.5;
  std::vector<Vec2> unit;
  for (const LinkDirection& d : dirs) {
    const Sector& s = link.sectors[d.sector];
    const Vec2 u = rotated(s.start_dir, d.offset);
    unit.push_back(u);
    radius = std::fmin(radius, 0.5 * convex_ray_exit(spec.pieces[s.piece].vertices, s.point, u));
  }
  if (!(radius > 0.0)) return std::nullopt;
  Quadruple q;
  const Sector& s0 = link.sectors[dirs[0].sector];
  q.points[0] = {s0.piece, s0.point};
  for (int k = 0; k < 3; ++k) {
    const Sector& s = link.sectors[dirs[k].sector];
    q.points[k + 1] = {s.piece, s.point + unit[k] * radius};
  }
  return q;
}

}  // namespace detail

inline VerifyReport verify(DiscretizationCache& cache, const VerifierConfig& config) {
  config.check();
  const ComplexSpec& spec = cache.spec();
  const double kappa = spec.kappa.kappa;
  VerifyReport rep;
  rep.kappa = kappa;
  rep.config = config;
  const double h0 = config.h_schedule.front();
  const DiscretizedComplex& dc0 = cache.at(h0);

  // Links at boundary classes (2D only).
  std::vector<Quadruple> probes;
  if (spec.dimension() == 2) {
    for (const LinkSite& site : link_sites(dc0)) {
      LinkRecord rec{site, build_link(spec, site.piece, site.point), {}};
      rec.verdict = classify_and_judge(rec.link);
      if (!rec.verdict.ok) {
        ViolationCertificate c;
        c.kind = CertificateKind::Link;
        c.points = {{site.piece, site.point}};
        c.value = rec.link.length;
        c.note = std::string(to_string(rec.link.kind)) + ": " + rec.verdict.reason;
        rep.certificates.push_back(c);
      }
      if (config.link_probes && site.node >= 0)
        if (auto q = detail::probe_quadruple(spec, rec.link)) probes.push_back(*q);
      rep.links.push_back(std::move(rec));
    }
  }

  // Random quadruples at the coarsest spacing.
  const int n = config.sample_count;
  std::vector<Quadruple> quads(n);
  std::vector<QuadrupleResult> results(n);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t i) {
        std::mt19937_64 rng = detail::sample_rng(config.seed, i);
        Quadruple& quad = quads[i];
        const bool near_e = dc0.node_count() > 0 && detail::uniform01(rng) < config.bias;
        if (near_e) {
          const int node = std::min(dc0.node_count() - 1, static_cast<int>(detail::uniform01(rng) * dc0.node_count()));
          const auto& reps = dc0.node(node).reps;
          const Rep& r = reps[std::min(reps.size() - 1, static_cast<std::size_t>(detail::uniform01(rng) * reps.size()))];
          quad.points[0] = detail::random_point_near(spec.pieces[r.piece], r.piece, r.pos, 5.0 * h0, rng);
        } else {
          quad.points[0] = detail::random_point(spec, rng);
        }
        std::array<QueryPoint, 4> q;
        q[0] = dc0.locate(quad.points[0]);
        std::array<std::optional<DistanceField>, 4> fields;
        if (config.focus_radius) {
          fields[0] = dc0.field(q[0]);
          const double r = *config.focus_radius;
          std::vector<int> close;
          for (int v = 0; v < dc0.node_count(); ++v)
            if (fields[0]->value[v] <= r) close.push_back(v);
          for (int k = 1; k < 4; ++k) {
            if (close.empty() || detail::uniform01(rng) < 0.3) {
              const Rep& own = q[0].reps.front();
              quad.points[k] = detail::random_point_near(spec.pieces[own.piece], own.piece, own.pos, r, rng);
            } else {
              const int v = close[std::min(close.size() - 1, static_cast<std::size_t>(detail::uniform01(rng) * close.size()))];
              const auto& reps = dc0.node(v).reps;
              const Rep& rr = reps[std::min(reps.size() - 1, static_cast<std::size_t>(detail::uniform01(rng) * reps.size()))];
              const double left = std::fmax(0.0, r - fields[0]->value[v]);
              quad.points[k] = detail::random_point_near(spec.pieces[rr.piece], rr.piece, rr.pos, left, rng);
            }
          }
        } else {
          for (int k = 1; k < 4; ++k) quad.points[k] = detail::random_point(spec, rng);
        }
        for (int k = 1; k < 4; ++k) q[k] = dc0.locate(quad.points[k]);
        results[i] = detail::judge_quadruple(detail::measure_four(dc0, q, &fields), kappa, h0,
                                             config.angle_tolerance_factor);
      },
      config.workers);

  // Probes join the candidates; they are tested at every spacing.
  const std::size_t first_probe = quads.size();
  for (const Quadruple& q : probes) {
    quads.push_back(q);
    results.push_back(quadruple_test(dc0, kappa, q, config.angle_tolerance_factor));
  }
  rep.sampled = n;
  rep.probes = static_cast<int>(probes.size());
  for (const QuadrupleResult& r : results) {
    if (r.verdict == Verdict::Skipped) {
      ++rep.skipped;
      continue;
    }
    ++rep.tested;
    rep.worst_margin = std::fmax(rep.worst_margin, r.margin - r.tolerance);
    if (r.verdict == Verdict::Fail) ++rep.raw_failures;
  }

  // Refinement of raw failures.
  for (std::size_t i = 0; i < quads.size(); ++i) {
    if (results[i].verdict != Verdict::Fail) continue;
    ViolationCertificate c;
    c.kind = CertificateKind::Quadruple;
    c.points.assign(quads[i].points.begin(), quads[i].points.end());
    c.history.push_back({h0, results[i].margin, results[i].tolerance});
    QuadrupleResult last = results[i];
    bool persists = true;
    for (std::size_t k = 1; k < config.h_schedule.size() && persists; ++k) {
      const double h = config.h_schedule[k];
      last = quadruple_test(cache.at(h), kappa, quads[i], config.angle_tolerance_factor);
      c.history.push_back({h, last.margin, last.tolerance});
      persists = last.verdict == Verdict::Fail;
    }
    if (!persists) continue;
    c.distances.assign(last.distances.begin(), last.distances.end());
    c.angles.assign(last.angles.begin(), last.angles.end());
    c.value = last.sum;
    c.margin = last.margin;
    c.tolerance = last.tolerance;
    c.note = i >= first_probe ? "link probe" : "sample " + std::to_string(i);
    rep.certificates.push_back(std::move(c));
  }

  if (kappa > 0.0) {
    const DiameterResult d = diameter_check(cache.at(config.h_schedule.back()), kappa);
    rep.diameter = d;
    if (d.verdict == Verdict::Fail) {
      ViolationCertificate c;
      c.kind = CertificateKind::Diameter;
      c.points = {d.from, d.to};
      c.distances = {d.estimate};
      c.value = d.estimate;
      c.margin = d.estimate - d.bound;
      c.tolerance = d.error_bound;
      c.history.push_back({config.h_schedule.back(), c.margin, c.tolerance});
      rep.certificates.push_back(std::move(c));
    }
  }
  return rep;
}

inline VerifyReport verify(const ComplexSpec& spec, const VerifierConfig& config) {
  DiscretizationCache cache(spec);
  return verify(cache, config);
}

// Monotonicity along a fixed path, re-run at every spacing of the schedule.
// Returns a certificate when the violation persists at all of them.
inline std::optional<ViolationCertificate> refined_monotonicity(DiscretizationCache& cache, const GeodesicPath& path,
                                                                PiecePoint p, const VerifierConfig& config) {
  ViolationCertificate c;
  c.kind = CertificateKind::Monotonicity;
  c.points = {p, path.point_at(0.0), path.point_at(path.total_length)};
  CurveCheckResult last;
  for (double h : config.h_schedule) {
    last = monotonicity_check(cache.at(h), cache.spec().kappa.kappa, path, p, config.angle_tolerance_factor);
    if (last.verdict != Verdict::Fail) return std::nullopt;
    c.history.push_back({h, last.margin, last.tolerance});
  }
  c.margin = last.margin;
  c.tolerance = last.tolerance;
  c.angles = last.witness;
  c.value = path.total_length;
  return c;
}

}  // namespace gluing
