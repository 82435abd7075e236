#pragma once

// Structural validation of a ComplexSpec against the hypotheses of the
// gluing theorem, plus the induced length metric on the glued set E.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gluing/complex.hpp"

namespace gluing {

enum class Severity { Info, Warning, Error };

inline const char* to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "?";
}

struct Finding {
  Severity severity = Severity::Info;
  std::string code;
  std::string message;
  std::vector<std::string> location;
};

enum class ValidationStatus { Valid, ValidWithWarnings, Invalid };

inline const char* to_string(ValidationStatus s) {
  switch (s) {
    case ValidationStatus::Valid: return "valid";
    case ValidationStatus::ValidWithWarnings: return "valid-with-warnings";
    case ValidationStatus::Invalid: return "invalid";
  }
  return "?";
}

struct ValidationReport {
  std::vector<Finding> findings;

  ValidationStatus status() const {
    bool warn = false;
    for (const Finding& f : findings) {
      if (f.severity == Severity::Error) return ValidationStatus::Invalid;
      warn |= f.severity == Severity::Warning;
    }
    return warn ? ValidationStatus::ValidWithWarnings : ValidationStatus::Valid;
  }

  bool has_code(const std::string& code) const {
    return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.code == code; });
  }

  // Codes of warning findings, sorted and unique.
  std::set<std::string> warning_codes() const {
    std::set<std::string> out;
    for (const Finding& f : findings)
      if (f.severity == Severity::Warning) out.insert(f.code);
    return out;
  }

  void add(Severity s, std::string code, std::string message, std::vector<std::string> location = {}) {
    findings.push_back({s, std::move(code), std::move(message), std::move(location)});
  }
};

namespace detail {

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline bool check_pieces(const ComplexSpec& spec, ValidationReport& rep) {
  bool ok = true;
  if (spec.pieces.empty()) {
    rep.add(Severity::Error, "NO_PIECES", "scene declares no pieces");
    return false;
  }
  const int dim = spec.pieces.front().dimension();
  for (const Piece& p : spec.pieces) {
    if (p.dimension() != dim) {
      rep.add(Severity::Error, "DIMENSION_MIX", "pieces of different dimensions cannot be glued", {p.id});
      ok = false;
    }
    if (p.kind == PieceKind::Segment) {
      if (p.vertices.size() != 2 || !(dist(p.vertices[0], p.vertices[1]) > kLengthTolerance)) {
        rep.add(Severity::Error, "DEGENERATE_PIECE", "segment needs two distinct endpoints", {p.id});
        ok = false;
      }
      continue;
    }
    const std::size_t n = p.vertices.size();
    if (n < 3) {
      rep.add(Severity::Error, "DEGENERATE_PIECE", "polygon needs at least three vertices", {p.id});
      ok = false;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = p.vertices[i], b = p.vertices[(i + 1) % n], c = p.vertices[(i + 2) % n];
      if (dist(a, b) <= kLengthTolerance) {
        rep.add(Severity::Error, "DEGENERATE_PIECE", "repeated vertex " + std::to_string(i), {p.id});
        ok = false;
        break;
      }
      if (!(cross(b - a, c - b) > 0.0)) {
        rep.add(Severity::Error, "NONCONVEX_PIECE",
                "polygon is not strictly convex and counterclockwise at vertex " + std::to_string((i + 1) % n),
                {p.id});
        ok = false;
        break;
      }
    }
  }
  return ok;
}

// Arc as an interval [start, start + length] of the piece's boundary coordinate.
inline std::pair<double, double> arc_boundary_interval(const ComplexSpec& spec, int arc) {
  const BoundaryArc& a = spec.arcs[arc];
  const Piece& p = spec.pieces[a.piece];
  auto cumulative = [&](int side) {
    double acc = 0.0;
    for (int s = 0; s < side; ++s) acc += p.side(s).length;
    return acc;
  };
  if (a.sub) return {cumulative(a.sub->side) + a.sub->from, a.sub->to - a.sub->from};
  return {cumulative(a.sides.front()), spec.arc_length(arc)};
}

inline bool check_arcs(const ComplexSpec& spec, ValidationReport& rep) {
  bool ok = true;
  const int np = static_cast<int>(spec.pieces.size());
  for (const BoundaryArc& a : spec.arcs) {
    if (a.piece < 0 || a.piece >= np) {
      rep.add(Severity::Error, "UNRESOLVED_ID", "arc refers to an unknown piece", {a.id});
      ok = false;
      continue;
    }
    const Piece& p = spec.pieces[a.piece];
    const int ns = p.side_count();
    if (a.sub) {
      if (p.kind == PieceKind::Segment || a.sub->side < 0 || a.sub->side >= ns) {
        rep.add(Severity::Error, "BAD_ARC", "sub-side arc needs a polygon side", {a.id, p.id});
        ok = false;
        continue;
      }
      const double len = p.side(a.sub->side).length;
      if (!(a.sub->from >= -kLengthTolerance && a.sub->to <= len + kLengthTolerance &&
            a.sub->to - a.sub->from > kLengthTolerance)) {
        rep.add(Severity::Error, "BAD_ARC",
                "sub-side interval must satisfy 0 <= from < to <= " + fmt_num(len), {a.id, p.id});
        ok = false;
      }
      continue;
    }
    if (a.sides.empty()) {
      rep.add(Severity::Error, "BAD_ARC", "arc lists no sides", {a.id});
      ok = false;
      continue;
    }
    bool indices_ok = true;
    for (int s : a.sides) indices_ok &= s >= 0 && s < ns;
    if (!indices_ok) {
      rep.add(Severity::Error, "UNRESOLVED_ID", "arc refers to a side the piece does not have", {a.id, p.id});
      ok = false;
      continue;
    }
    if (p.kind == PieceKind::Segment) {
      if (a.sides.size() != 1) {
        rep.add(Severity::Error, "BAD_ARC", "an arc on a segment is a single endpoint", {a.id, p.id});
        ok = false;
      }
      continue;
    }
    std::set<int> seen(a.sides.begin(), a.sides.end());
    bool contiguous = seen.size() == a.sides.size();
    for (std::size_t k = 1; k < a.sides.size(); ++k) contiguous &= a.sides[k] == (a.sides[k - 1] + 1) % ns;
    if (!contiguous) {
      rep.add(Severity::Error, "ARC_NOT_CONTIGUOUS", "sides must be consecutive in counterclockwise order",
              {a.id, p.id});
      ok = false;
    }
  }
  if (!ok) return false;

  for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.arcs.size(); ++j) {
      const BoundaryArc& a = spec.arcs[i];
      const BoundaryArc& b = spec.arcs[j];
      if (a.piece != b.piece) continue;
      const Piece& p = spec.pieces[a.piece];
      bool overlap = false;
      if (p.kind == PieceKind::Segment) {
        overlap = a.sides[0] == b.sides[0];
      } else {
        const double per = p.perimeter();
        const auto [s1, l1] = arc_boundary_interval(spec, static_cast<int>(i));
        const auto [s2, l2] = arc_boundary_interval(spec, static_cast<int>(j));
        const double d = std::fmod(std::fmod(s2 - s1, per) + per, per);
        overlap = d < l1 - kLengthTolerance || d + l2 > per + kLengthTolerance;
      }
      if (overlap) {
        rep.add(Severity::Error, "ARC_OVERLAP", "arcs overlap in more than endpoints", {a.id, b.id});
        ok = false;
      }
    }
  }
  return ok;
}

inline bool check_gluings(const ComplexSpec& spec, ValidationReport& rep) {
  bool ok = true;
  const int na = static_cast<int>(spec.arcs.size());
  std::vector<int> owner(spec.arcs.size(), -1);
  for (std::size_t g = 0; g < spec.gluings.size(); ++g) {
    const GluingClass& gc = spec.gluings[g];
    if (gc.members.empty()) {
      rep.add(Severity::Error, "BAD_GLUING", "gluing class has no members", {gc.id});
      ok = false;
      continue;
    }
    bool resolved = true;
    for (const GluingMember& m : gc.members) {
      if (m.arc < 0 || m.arc >= na) {
        rep.add(Severity::Error, "UNRESOLVED_ID", "gluing refers to an unknown arc", {gc.id});
        ok = resolved = false;
        continue;
      }
      if (owner[m.arc] >= 0) {
        rep.add(Severity::Error, "ARC_MULTIPLY_GLUED", "arc belongs to more than one gluing class",
                {gc.id, spec.arcs[m.arc].id});
        ok = false;
      }
      owner[m.arc] = static_cast<int>(g);
    }
    if (!resolved) continue;
    if (gc.self_fold && gc.members.size() != 1) {
      rep.add(Severity::Error, "BAD_GLUING", "a fold has exactly one arc", {gc.id});
      ok = false;
      continue;
    }
    const double len0 = spec.arc_length(gc.members.front().arc);
    for (const GluingMember& m : gc.members) {
      const double len = spec.arc_length(m.arc);
      if (std::abs(len - len0) > kLengthTolerance) {
        rep.add(Severity::Error, "ARC_LENGTH_MISMATCH",
                "arc lengths differ (" + fmt_num(len0) + " vs " + fmt_num(len) + "); the gluing is not an isometry",
                {gc.id, spec.arcs[gc.members.front().arc].id, spec.arcs[m.arc].id});
        ok = false;
      }
    }
    if (!gc.self_fold && gc.members.size() >= 3) {
      rep.add(Severity::Warning, "THEOREM_HYPOTHESIS_VIOLATED",
              "class of " + std::to_string(gc.members.size()) + " arcs is not an involution", {gc.id});
    } else if (!gc.self_fold && gc.members.size() == 1) {
      rep.add(Severity::Info, "TRIVIAL_GLUING", "single-arc class identifies nothing", {gc.id});
    }
  }
  return ok;
}

}  // namespace detail

inline ValidationReport validate(const ComplexSpec& spec) {
  ValidationReport rep;
  if (!detail::check_pieces(spec, rep)) return rep;
  if (!detail::check_arcs(spec, rep)) return rep;
  if (!detail::check_gluings(spec, rep)) return rep;

  // Unions of full sides are extremal; a sub-interval of a side is not.
  for (const BoundaryArc& a : spec.arcs) {
    if (!a.sub) continue;
    const double len = spec.pieces[a.piece].side(a.sub->side).length;
    if (a.sub->from > kLengthTolerance || a.sub->to < len - kLengthTolerance)
      rep.add(Severity::Warning, "NOT_STRUCTURALLY_EXTREMAL",
              "arc ends in the interior of a side", {a.id, spec.pieces[a.piece].id});
  }

  const double kappa = spec.kappa.kappa;
  const double dk = spec.kappa.diameter_bound();
  const int dim = spec.dimension();
  if (kappa > 0.0) {
    for (std::size_t pi = 0; pi < spec.pieces.size(); ++pi) {
      const Piece& p = spec.pieces[pi];
      if (p.kind == PieceKind::Polygon) {
        rep.add(Severity::Warning, "THEOREM_HYPOTHESIS_VIOLATED",
                "a flat piece does not have curvature >= " + detail::fmt_num(kappa), {p.id});
      } else if (p.perimeter() > dk + kLengthTolerance) {
        rep.add(Severity::Warning, "THEOREM_HYPOTHESIS_VIOLATED",
                "segment longer than D_kappa is not of curvature >= " + detail::fmt_num(kappa), {p.id});
      }
      // kappa-extremality per component.
      std::vector<Vec2> points;
      bool has_length = false;
      for (std::size_t ai = 0; ai < spec.arcs.size(); ++ai) {
        if (spec.arcs[ai].piece != static_cast<int>(pi)) continue;
        if (spec.arc_length(static_cast<int>(ai)) > kLengthTolerance) has_length = true;
        const Vec2 q = spec.arc_point(static_cast<int>(ai), 0.0);
        if (std::none_of(points.begin(), points.end(), [&](Vec2 o) { return dist(o, q) <= 1e-9; }))
          points.push_back(q);
      }
      if (has_length || points.size() >= 2) continue;
      if (points.empty()) {
        if (p.diameter() > 0.5 * dk + kLengthTolerance)
          rep.add(Severity::Warning, "NOT_KAPPA_EXTREMAL",
                  "empty glued set on a component of diameter > D_kappa / 2", {p.id});
      } else {
        double far = 0.0;
        for (const Vec2& v : p.vertices) far = std::fmax(far, dist(v, points[0]));
        if (far > 0.5 * dk + kLengthTolerance)
          rep.add(Severity::Warning, "NOT_KAPPA_EXTREMAL",
                  "one-point glued set whose D_kappa / 2 ball misses part of the component", {p.id});
      }
    }
    if (dim == 1 && spec.pieces.size() > 2)
      rep.add(Severity::Warning, "THEOREM_HYPOTHESIS_VIOLATED",
              "one-dimensional input with positive kappa has more than two components");
  }

  if (dim == 2)
    rep.add(Severity::Info, "SPADE_CONDITION",
            "boundary arcs of convex pieces carry the boundary path metric; local bi-Lipschitz condition holds");
  return rep;
}

// The union E of all arcs as a metric graph over arc breakpoints, with the
// path metric along the arcs (before gluing).
class ArcComplex {
 public:
  explicit ArcComplex(const ComplexSpec& spec) : spec_(&spec), chain_(spec.arcs.size()) {
    for (std::size_t ai = 0; ai < spec.arcs.size(); ++ai) {
      const int arc = static_cast<int>(ai);
      const int piece = spec.arcs[ai].piece;
      for (double t : spec.arc_breakpoints(arc)) chain_[ai].push_back({t, node_of(piece, spec.arc_point(arc, t))});
    }
  }

  int node_count() const { return static_cast<int>(nodes_.size()); }

  // Shortest distances along E from p to q; infinite when disconnected in E.
  double distance(ArcPoint p, ArcPoint q) const {
    check(p);
    check(q);
    ArcComplex scratch = *this;
    const int np = scratch.insert(p);
    const int nq = scratch.insert(q);
    return scratch.dijkstra(np)[nq];
  }

  // Largest finite distance between two breakpoints.
  double breakpoint_diameter() const {
    double best = 0.0;
    for (int s = 0; s < node_count(); ++s)
      for (double v : dijkstra(s))
        if (std::isfinite(v)) best = std::fmax(best, v);
    return best;
  }

 private:
  struct Node {
    int piece;
    Vec2 pos;
  };

  void check(ArcPoint a) const {
    const int na = static_cast<int>(spec_->arcs.size());
    if (a.arc < 0 || a.arc >= na || a.t < -kLengthTolerance || a.t > spec_->arc_length(a.arc) + kLengthTolerance)
      throw std::domain_error("induced_arc_distance: point is not on a declared arc");
  }

  int node_of(int piece, Vec2 pos) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].piece == piece && dist(nodes_[i].pos, pos) <= 1e-9) return static_cast<int>(i);
    nodes_.push_back({piece, pos});
    return static_cast<int>(nodes_.size() - 1);
  }

  int insert(ArcPoint a) {
    const int n = node_of(spec_->arcs[a.arc].piece, spec_->arc_point(a.arc, a.t));
    chain_[a.arc].push_back({a.t, n});
    return n;
  }

  std::vector<double> dijkstra(int source) const {
    struct Edge {
      int to;
      double w;
    };
    std::vector<std::vector<Edge>> adj(nodes_.size());
    for (auto c : chain_) {
      std::sort(c.begin(), c.end());
      for (std::size_t k = 1; k < c.size(); ++k) {
        const int a = c[k - 1].second, b = c[k].second;
        if (a == b) continue;
        const double w = c[k].first - c[k - 1].first;
        adj[a].push_back({b, w});
        adj[b].push_back({a, w});
      }
    }
    std::vector<double> d(nodes_.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > d[u]) continue;
      for (const Edge& e : adj[u]) {
        if (du + e.w < d[e.to]) {
          d[e.to] = du + e.w;
          pq.push({d[e.to], e.to});
        }
      }
    }
    return d;
  }

  const ComplexSpec* spec_;
  std::vector<Node> nodes_;
  std::vector<std::vector<std::pair<double, int>>> chain_;
};

// Length metric on E induced from the pieces. Infinite when p and q lie in
// different components of E.
inline double induced_arc_distance(const ComplexSpec& spec, ArcPoint p, ArcPoint q) {
  return ArcComplex(spec).distance(p, q);
}

// Samples pairs on the glued arcs and checks that the gluing map preserves
// the induced length metric of E.
inline ValidationReport gluing_isometry_check(const ComplexSpec& spec, int samples, std::uint64_t seed = 0x5eed) {
  ValidationReport rep;
  std::vector<int> glued;
  std::vector<double> weight;
  for (const GluingClass& gc : spec.gluings)
    for (const GluingMember& m : gc.members) {
      glued.push_back(m.arc);
      weight.push_back(std::fmax(spec.arc_length(m.arc), 1e-12));
    }
  if (glued.empty()) return rep;

  const ArcComplex complex(spec);
  const double diameter = complex.breakpoint_diameter();
  const double tolerance = 1e-6 * std::fmax(diameter, 1.0);

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick(weight.begin(), weight.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const int a = glued[pick(rng)], b = glued[pick(rng)];
    const ArcPoint p{a, unit(rng) * spec.arc_length(a)}, q{b, unit(rng) * spec.arc_length(b)};
    const double before = complex.distance(p, q);
    const double after = complex.distance(spec.gluing_map(p), spec.gluing_map(q));
    const bool mismatch = std::isfinite(before) != std::isfinite(after) ||
                          (std::isfinite(before) && std::abs(before - after) > tolerance);
    if (mismatch) {
      ++failures;
      if (std::isfinite(before) && std::isfinite(after)) worst = std::fmax(worst, std::abs(before - after));
      else worst = std::numeric_limits<double>::infinity();
    }
  }
  if (failures > 0)
    rep.add(Severity::Error, "GLUING_NOT_ISOMETRIC",
            std::to_string(failures) + " of " + std::to_string(samples) +
                " sampled pairs change induced distance (worst deviation " + detail::fmt_num(worst) + ")");
  else
    rep.add(Severity::Info, "GLUING_ISOMETRIC",
            std::to_string(samples) + " sampled pairs preserved within " + detail::fmt_num(tolerance));
  return rep;
}

}  // namespace gluing
