#pragma once

// Input data model: flat pieces, boundary arcs on them, and gluing classes
// that identify arcs through their arclength charts.
//
// A polygon piece is strictly convex and counterclockwise; side i runs from
// vertex i to vertex i+1. A segment piece has two zero-length "sides", one per
// endpoint, so arcs on segments are single boundary points.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gluing/comparison.hpp"
#include "gluing/geometry.hpp"

namespace gluing {

inline constexpr double kLengthTolerance = 1e-9;

enum class PieceKind { Polygon, Segment };

struct Side {
  int start_vertex = 0;
  double length = 0.0;
  Vec2 direction;
};

struct Piece {
  std::string id;
  PieceKind kind = PieceKind::Polygon;
  std::vector<Vec2> vertices;

  int dimension() const { return kind == PieceKind::Polygon ? 2 : 1; }
  int side_count() const { return kind == PieceKind::Polygon ? static_cast<int>(vertices.size()) : 2; }

  Side side(int i) const {
    if (kind == PieceKind::Segment) return {i, 0.0, Vec2{}};
    const Vec2 a = vertices[i], b = vertices[(i + 1) % vertices.size()];
    return {i, dist(a, b), normalized(b - a)};
  }
  Vec2 side_start(int i) const { return vertices[i % vertices.size()]; }
  Vec2 side_end(int i) const {
    return kind == PieceKind::Segment ? vertices[i] : vertices[(i + 1) % vertices.size()];
  }

  // Boundary length (polygon) or segment length.
  double perimeter() const {
    if (kind == PieceKind::Segment) return dist(vertices[0], vertices[1]);
    double p = 0.0;
    for (int i = 0; i < side_count(); ++i) p += side(i).length;
    return p;
  }

  double diameter() const {
    double d = 0.0;
    for (const Vec2& a : vertices)
      for (const Vec2& b : vertices) d = std::fmax(d, dist(a, b));
    return d;
  }

  // Interior angle at vertex i of a polygon.
  double corner_angle(int i) const {
    const int n = side_count();
    const Vec2 v = vertices[i];
    return angle_between(vertices[(i + 1) % n] - v, vertices[(i + n - 1) % n] - v);
  }

  bool contains(Vec2 p, double eps = 1e-9) const {
    if (kind == PieceKind::Polygon) return convex_contains(vertices, p, eps);
    return segment_distance(p, vertices[0], vertices[1]) <= eps;
  }
};

struct SubSide {
  int side = 0;
  double from = 0.0;
  double to = 0.0;
};

struct BoundaryArc {
  std::string id;
  int piece = -1;
  std::vector<int> sides;      // consecutive full sides, or
  std::optional<SubSide> sub;  // a sub-interval of one side
};

struct GluingMember {
  int arc = -1;
  bool reversed = false;
};

struct GluingClass {
  std::string id;
  std::vector<GluingMember> members;
  bool self_fold = false;
};

// A location on an arc by arclength parameter.
struct ArcPoint {
  int arc = -1;
  double t = 0.0;
};

struct ComplexSpec {
  std::vector<Piece> pieces;
  std::vector<BoundaryArc> arcs;
  std::vector<GluingClass> gluings;
  Curvature kappa;

  int piece_index(const std::string& id) const {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].id == id) return static_cast<int>(i);
    return -1;
  }
  int arc_index(const std::string& id) const {
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if (arcs[i].id == id) return static_cast<int>(i);
    return -1;
  }

  int dimension() const { return pieces.empty() ? 0 : pieces.front().dimension(); }

  const Piece& arc_piece(int arc) const { return pieces.at(arcs.at(arc).piece); }

  double arc_length(int arc) const {
    const BoundaryArc& a = arcs.at(arc);
    const Piece& p = pieces.at(a.piece);
    if (a.sub) return a.sub->to - a.sub->from;
    double len = 0.0;
    for (int s : a.sides) len += p.side(s).length;
    return len;
  }

  // A full-side arc that returns to its starting corner.
  bool arc_closed(int arc) const {
    const BoundaryArc& a = arcs.at(arc);
    const Piece& p = pieces.at(a.piece);
    return !a.sub && p.kind == PieceKind::Polygon && static_cast<int>(a.sides.size()) == p.side_count();
  }

  // Arclength parameters of the corners met by the arc, including 0 and length.
  std::vector<double> arc_breakpoints(int arc) const {
    const BoundaryArc& a = arcs.at(arc);
    if (a.sub) return {0.0, arc_length(arc)};
    std::vector<double> out{0.0};
    double acc = 0.0;
    for (int s : a.sides) {
      acc += arc_piece(arc).side(s).length;
      out.push_back(acc);
    }
    return out;
  }

  Vec2 arc_point(int arc, double t) const {
    const BoundaryArc& a = arcs.at(arc);
    const Piece& p = pieces.at(a.piece);
    if (p.kind == PieceKind::Segment) return p.vertices.at(a.sides.at(0));
    if (a.sub) {
      const Side s = p.side(a.sub->side);
      return p.side_start(a.sub->side) + s.direction * (a.sub->from + t);
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < a.sides.size(); ++k) {
      const Side s = p.side(a.sides[k]);
      if (t <= acc + s.length || k + 1 == a.sides.size())
        return p.side_start(a.sides[k]) + s.direction * std::fmin(s.length, std::fmax(0.0, t - acc));
      acc += s.length;
    }
    return p.side_start(a.sides.front());
  }

  // Unit tangent of the germ leaving parameter t in direction sign (+1 or -1).
  // The germ must lie in the arc.
  Vec2 arc_germ_direction(int arc, double t, int sign) const {
    const BoundaryArc& a = arcs.at(arc);
    const Piece& p = pieces.at(a.piece);
    if (a.sub) return p.side(a.sub->side).direction * static_cast<double>(sign);
    double acc = 0.0;
    for (std::size_t k = 0; k < a.sides.size(); ++k) {
      const Side s = p.side(a.sides[k]);
      const bool last = k + 1 == a.sides.size();
      const bool inside = sign > 0 ? (t < acc + s.length - kLengthTolerance || last)
                                   : (t <= acc + s.length + kLengthTolerance || last);
      if (inside) return s.direction * static_cast<double>(sign);
      acc += s.length;
    }
    return p.side(a.sides.back()).direction * static_cast<double>(sign);
  }

  // Every (arc, t) whose chart hits `p` on piece `piece`. A closed arc reports
  // both t = 0 and t = length at its starting corner.
  std::vector<ArcPoint> arcs_through(int piece, Vec2 p, double eps = 1e-9) const {
    std::vector<ArcPoint> out;
    for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
      const BoundaryArc& a = arcs[ai];
      if (a.piece != piece) continue;
      const Piece& pc = pieces[piece];
      const int arc = static_cast<int>(ai);
      if (pc.kind == PieceKind::Segment) {
        if (dist(pc.vertices.at(a.sides.at(0)), p) <= eps) out.push_back({arc, 0.0});
        continue;
      }
      if (a.sub) {
        const Vec2 s0 = pc.side_start(a.sub->side);
        const Side s = pc.side(a.sub->side);
        const Vec2 from = s0 + s.direction * a.sub->from, to = s0 + s.direction * a.sub->to;
        double u = 0.0;
        if (segment_distance(p, from, to, &u) <= eps) out.push_back({arc, u * (a.sub->to - a.sub->from)});
        continue;
      }
      double acc = 0.0;
      std::vector<double> found;
      for (int si : a.sides) {
        const Side s = pc.side(si);
        double u = 0.0;
        if (segment_distance(p, pc.side_start(si), pc.side_end(si), &u) <= eps) found.push_back(acc + u * s.length);
        acc += s.length;
      }
      std::sort(found.begin(), found.end());
      double last = -1.0;
      for (double t : found) {
        if (t - last > eps) out.push_back({arc, t});
        last = t;
      }
      if (arc_closed(arc) && !found.empty() && found.front() <= eps &&
          found.back() < acc - eps)
        out.push_back({arc, acc});
    }
    return out;
  }

  // Index of the gluing class containing the arc, and the member slot.
  std::pair<int, int> arc_class(int arc) const {
    for (std::size_t g = 0; g < gluings.size(); ++g)
      for (std::size_t m = 0; m < gluings[g].members.size(); ++m)
        if (gluings[g].members[m].arc == arc) return {static_cast<int>(g), static_cast<int>(m)};
    return {-1, -1};
  }

  // All arc points that the gluing directly identifies with (arc, t), itself excluded.
  std::vector<ArcPoint> glued_images(ArcPoint ap) const {
    std::vector<ArcPoint> out;
    const auto [g, m] = arc_class(ap.arc);
    if (g < 0) return out;
    const GluingClass& gc = gluings[g];
    const double len = arc_length(ap.arc);
    if (gc.self_fold) {
      out.push_back({ap.arc, len - ap.t});
      return out;
    }
    const double s = gc.members[m].reversed ? len - ap.t : ap.t;
    for (std::size_t j = 0; j < gc.members.size(); ++j) {
      if (static_cast<int>(j) == m) continue;
      const GluingMember& other = gc.members[j];
      const double lj = arc_length(other.arc);
      out.push_back({other.arc, other.reversed ? lj - s : s});
    }
    return out;
  }

  // Image of a germ (arc, t, sign) under the gluing: the same list as
  // glued_images, with the sign flipped where orientations disagree.
  std::vector<std::pair<ArcPoint, int>> glued_germs(ArcPoint ap, int sign) const {
    std::vector<std::pair<ArcPoint, int>> out;
    const auto [g, m] = arc_class(ap.arc);
    if (g < 0) return out;
    const GluingClass& gc = gluings[g];
    const double len = arc_length(ap.arc);
    if (gc.self_fold) {
      out.push_back({{ap.arc, len - ap.t}, -sign});
      return out;
    }
    const bool rev = gc.members[m].reversed;
    const double s = rev ? len - ap.t : ap.t;
    for (std::size_t j = 0; j < gc.members.size(); ++j) {
      if (static_cast<int>(j) == m) continue;
      const GluingMember& other = gc.members[j];
      const double lj = arc_length(other.arc);
      out.push_back({{other.arc, other.reversed ? lj - s : s}, rev == other.reversed ? sign : -sign});
    }
    return out;
  }

  // Map used by the isometry check: the next member of the class (an
  // involution for classes of size two and for folds).
  ArcPoint gluing_map(ArcPoint ap) const {
    const auto [g, m] = arc_class(ap.arc);
    if (g < 0) return ap;
    const GluingClass& gc = gluings[g];
    const double len = arc_length(ap.arc);
    if (gc.self_fold) return {ap.arc, len - ap.t};
    const GluingMember& self = gc.members[m];
    const GluingMember& next = gc.members[(m + 1) % gc.members.size()];
    const double lj = arc_length(next.arc);
    // Constant-speed reparameterization when lengths differ.
    const double s = (self.reversed ? len - ap.t : ap.t) / (len > 0.0 ? len : 1.0);
    return {next.arc, (next.reversed ? 1.0 - s : s) * lj};
  }
};

}  // namespace gluing
