#pragma once

// Glued spaces of directions at boundary points of 2D scenes.
//
// Each pre-image of a point contributes a sector of directions: an arc of
// length equal to the interior angle there (pi at a side-interior point). The
// two ends of a sector are boundary germs; when a gluing chart carries one
// germ onto another, the corresponding sector ends are identified. The result
// is a metric graph whose shape decides the local curvature bound.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gluing/complex.hpp"
#include "gluing/glued_metric.hpp"

namespace gluing {

inline constexpr double kLinkTolerance = 1e-9;

struct Sector {
  int piece = -1;
  Vec2 point;
  double angle = 0.0;
  Vec2 start_dir;  // offset 0; the sector sweeps counterclockwise
  Vec2 end_dir;    // offset == angle
};

enum class LinkKind { Circle, Interval, Graph };

inline const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::Circle:
      return "circle";
    case LinkKind::Interval:
      return "interval";
    case LinkKind::Graph:
      return "graph";
  }
  return "?";
}

// A direction in the link: a sector and the angle swept from its start.
struct LinkDirection {
  int sector = -1;
  double offset = 0.0;
};

struct LinkSpace {
  std::vector<Sector> sectors;
  // Class of sector end 2*s (start) and 2*s + 1 (end).
  std::vector<int> end_class;
  int class_count = 0;
  LinkKind kind = LinkKind::Graph;
  double length = 0.0;
  // Nodes are end classes whose degree differs from two; a circle has none.
  int graph_nodes = 0;
  int graph_edges = 0;
  std::vector<double> graph_edge_lengths;
  // Walks through sectors as (sector, entry end): the whole circle, the whole
  // interval, or one walk per graph edge.
  std::vector<std::vector<std::pair<int, int>>> trails;

  // The direction at arclength `a` along a trail.
  LinkDirection trail_direction(const std::vector<std::pair<int, int>>& trail, double a) const;

  std::string description() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d nodes, %d edges", graph_nodes, graph_edges);
    return buf;
  }
};

namespace detail {

inline int find_sector(const std::vector<Sector>& sectors, int piece, Vec2 p) {
  for (std::size_t i = 0; i < sectors.size(); ++i)
    if (sectors[i].piece == piece && dist(sectors[i].point, p) <= 1e-7) return static_cast<int>(i);
  return -1;
}

inline Sector make_sector(const ComplexSpec& spec, int piece, Vec2 p) {
  const Piece& pc = spec.pieces.at(piece);
  const int n = pc.side_count();
  for (int i = 0; i < n; ++i)
    if (dist(pc.vertices[i], p) <= 1e-7) {
      const Vec2 fwd = normalized(pc.vertices[(i + 1) % n] - pc.vertices[i]);
      const Vec2 back = normalized(pc.vertices[(i + n - 1) % n] - pc.vertices[i]);
      return {piece, pc.vertices[i], pc.corner_angle(i), fwd, back};
    }
  for (int i = 0; i < n; ++i)
    if (segment_distance(p, pc.side_start(i), pc.side_end(i)) <= 1e-7) {
      const Vec2 d = pc.side(i).direction;
      return {piece, p, kPi, d, d * -1.0};
    }
  // Interior point: a full circle, both ends the same direction.
  return {piece, p, 2.0 * kPi, Vec2{1.0, 0.0}, Vec2{1.0, 0.0}};
}

// Germs (arc point, sign) of arcs leaving p on the piece, with their directions.
struct Germ {
  ArcPoint at;
  int sign;
  Vec2 direction;
};

inline std::vector<Germ> germs_at(const ComplexSpec& spec, int piece, Vec2 p) {
  std::vector<Germ> out;
  for (const ArcPoint& ap : spec.arcs_through(piece, p, 1e-7)) {
    const double len = spec.arc_length(ap.arc);
    if (len <= kLengthTolerance) continue;
    if (ap.t < len - kLengthTolerance) out.push_back({ap, +1, spec.arc_germ_direction(ap.arc, ap.t, +1)});
    if (ap.t > kLengthTolerance) out.push_back({ap, -1, spec.arc_germ_direction(ap.arc, ap.t, -1)});
  }
  return out;
}

// Which end of the sector a boundary germ leaves through (-1 if neither).
inline int sector_end(const Sector& s, Vec2 dir) {
  if (s.angle >= 2.0 * kPi - kLinkTolerance) return -1;
  if (dot(s.start_dir, dir) > 1.0 - 1e-9) return 0;
  if (dot(s.end_dir, dir) > 1.0 - 1e-9) return 1;
  return -1;
}

}  // namespace detail

// The glued link at the class of point p of a piece. Pre-images are found by
// following germ identifications, so the argument may be any one of them.
inline LinkSpace build_link(const ComplexSpec& spec, int piece, Vec2 p) {
  if (spec.dimension() != 2) throw std::domain_error("build_link: links are only built for 2D scenes");
  if (piece < 0 || piece >= static_cast<int>(spec.pieces.size())) throw std::domain_error("build_link: unknown piece");
  if (!spec.pieces[piece].contains(p, 1e-7)) throw std::domain_error("build_link: point lies outside its piece");

  LinkSpace link;
  link.sectors.push_back(detail::make_sector(spec, piece, p));
  std::vector<std::pair<int, int>> pairs;  // identified sector ends
  for (std::size_t s = 0; s < link.sectors.size(); ++s) {
    const Sector sec = link.sectors[s];
    for (const detail::Germ& g : detail::germs_at(spec, sec.piece, sec.point)) {
      const int e = detail::sector_end(sec, g.direction);
      if (e < 0) continue;
      for (const auto& [img, sign] : spec.glued_germs(g.at, g.sign)) {
        const int ip = spec.arcs[img.arc].piece;
        const Vec2 ipos = spec.arc_point(img.arc, img.t);
        int t = detail::find_sector(link.sectors, ip, ipos);
        if (t < 0) {
          link.sectors.push_back(detail::make_sector(spec, ip, ipos));
          t = static_cast<int>(link.sectors.size()) - 1;
        }
        const int f = detail::sector_end(link.sectors[t], spec.arc_germ_direction(img.arc, img.t, sign));
        if (f >= 0) pairs.push_back({2 * static_cast<int>(s) + e, 2 * t + f});
      }
    }
  }

  const int ends = 2 * static_cast<int>(link.sectors.size());
  detail::DisjointSets sets(ends);
  for (std::size_t s = 0; s < link.sectors.size(); ++s)
    if (link.sectors[s].angle >= 2.0 * kPi - kLinkTolerance) sets.unite(2 * s, 2 * s + 1);
  for (auto [a, b] : pairs) sets.unite(a, b);
  std::vector<int> id(ends, -1);
  link.end_class.assign(ends, -1);
  for (int e = 0; e < ends; ++e) {
    const int r = sets.find(e);
    if (id[r] < 0) id[r] = link.class_count++;
    link.end_class[e] = id[r];
  }

  std::vector<int> degree(link.class_count, 0);
  for (int e = 0; e < ends; ++e) ++degree[link.end_class[e]];
  detail::DisjointSets comp(link.class_count);
  for (std::size_t s = 0; s < link.sectors.size(); ++s) {
    comp.unite(link.end_class[2 * s], link.end_class[2 * s + 1]);
    link.length += link.sectors[s].angle;
  }
  int components = 0, deg1 = 0, deg2 = 0;
  for (int c = 0; c < link.class_count; ++c) {
    if (comp.find(c) == c) ++components;
    if (degree[c] == 1) ++deg1;
    if (degree[c] == 2) ++deg2;
  }
  if (components == 1 && deg2 == link.class_count)
    link.kind = LinkKind::Circle;
  else if (components == 1 && deg1 == 2 && deg1 + deg2 == link.class_count)
    link.kind = LinkKind::Interval;
  else
    link.kind = LinkKind::Graph;

  if (link.kind == LinkKind::Circle) {
    std::vector<std::pair<int, int>> walk;
    int s = 0, entry = 0;
    for (std::size_t step = 0; step < link.sectors.size(); ++step) {
      walk.push_back({s, entry});
      const int exit_end = 2 * s + 1 - entry;
      int next = -1, next_entry = 0;
      for (int e = 0; e < ends; ++e)
        if (link.end_class[e] == link.end_class[exit_end] && e != exit_end) {
          next = e / 2;
          next_entry = e % 2;
        }
      if (next < 0) break;
      s = next;
      entry = next_entry;
    }
    link.trails.push_back(std::move(walk));
  }

  // Contract degree-two classes to describe the link as a metric graph.
  if (link.kind != LinkKind::Circle) {
    std::vector<char> is_node(link.class_count, 0);
    for (int c = 0; c < link.class_count; ++c) is_node[c] = degree[c] != 2;
    for (int c = 0; c < link.class_count; ++c) link.graph_nodes += is_node[c];
    std::vector<char> used(link.sectors.size(), 0);
    for (std::size_t s0 = 0; s0 < link.sectors.size(); ++s0) {
      for (int side = 0; side < 2; ++side) {
        if (used[s0] || !is_node[link.end_class[2 * s0 + side]]) continue;
        // Walk from a node through degree-two classes until the next node.
        double len = 0.0;
        int s = static_cast<int>(s0), entry = side;
        std::vector<std::pair<int, int>> walk;
        while (true) {
          used[s] = 1;
          walk.push_back({s, entry});
          len += link.sectors[s].angle;
          const int exit_class = link.end_class[2 * s + 1 - entry];
          if (is_node[exit_class]) break;
          int next = -1, next_entry = 0;
          for (int e = 0; e < ends; ++e)
            if (link.end_class[e] == exit_class && e != 2 * s + 1 - entry) {
              next = e / 2;
              next_entry = e % 2;
            }
          if (next < 0 || used[next]) break;
          s = next;
          entry = next_entry;
        }
        link.graph_edge_lengths.push_back(len);
        link.trails.push_back(std::move(walk));
      }
    }
    link.graph_edges = static_cast<int>(link.graph_edge_lengths.size());
  }
  return link;
}

inline LinkDirection LinkSpace::trail_direction(const std::vector<std::pair<int, int>>& trail, double a) const {
  for (std::size_t k = 0; k < trail.size(); ++k) {
    const auto [s, entry] = trail[k];
    const double w = sectors[s].angle;
    if (a <= w || k + 1 == trail.size()) {
      const double local = std::fmin(std::fmax(a, 0.0), w);
      return {s, entry == 0 ? local : w - local};
    }
    a -= w;
  }
  return {};
}

inline LinkSpace build_link(const ComplexSpec& spec, const NodeClass& node) {
  if (node.reps.empty()) throw std::domain_error("build_link: empty node class");
  if (!node.on_e) throw std::domain_error("build_link: node is off the glued set");
  return build_link(spec, node.reps.front().piece, node.reps.front().pos);
}

struct LinkVerdict {
  bool ok = true;
  LinkKind kind = LinkKind::Graph;
  double length = 0.0;
  std::string reason;
};

// A one-dimensional space of curvature >= 1 is a circle of length <= 2 pi or
// an interval of length <= pi; anything branching is a violation.
inline LinkVerdict classify_and_judge(const LinkSpace& link) {
  LinkVerdict v{true, link.kind, link.length, {}};
  switch (link.kind) {
    case LinkKind::Circle:
      v.ok = link.length <= 2.0 * kPi + kLinkTolerance;
      if (!v.ok) v.reason = "circle longer than 2pi";
      break;
    case LinkKind::Interval:
      v.ok = link.length <= kPi + kLinkTolerance;
      if (!v.ok) v.reason = "interval longer than pi";
      break;
    case LinkKind::Graph:
      v.ok = false;
      v.reason = "branching link (" + link.description() + ")";
      break;
  }
  return v;
}

// Exact distance in the metric graph of the link.
inline double link_distance(const LinkSpace& link, LinkDirection u, LinkDirection v) {
  const int n = link.class_count;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
  for (int c = 0; c < n; ++c) d[c * n + c] = 0.0;
  for (std::size_t s = 0; s < link.sectors.size(); ++s) {
    const int a = link.end_class[2 * s], b = link.end_class[2 * s + 1];
    const double w = link.sectors[s].angle;
    d[a * n + b] = std::fmin(d[a * n + b], w);
    d[b * n + a] = std::fmin(d[b * n + a], w);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i * n + j] = std::fmin(d[i * n + j], d[i * n + k] + d[k * n + j]);

  const Sector& su = link.sectors.at(u.sector);
  const Sector& sv = link.sectors.at(v.sector);
  double best = u.sector == v.sector ? std::abs(u.offset - v.offset) : inf;
  const double to_u[2] = {u.offset, su.angle - u.offset};
  const double to_v[2] = {v.offset, sv.angle - v.offset};
  for (int eu = 0; eu < 2; ++eu)
    for (int ev = 0; ev < 2; ++ev) {
      const int cu = link.end_class[2 * u.sector + eu], cv = link.end_class[2 * v.sector + ev];
      best = std::fmin(best, to_u[eu] + d[cu * n + cv] + to_v[ev]);
    }
  return best;
}

// Locates the direction `dir` leaving the point `p` of a piece in the link.
inline std::optional<LinkDirection> locate_direction(const LinkSpace& link, int piece, Vec2 p, Vec2 dir) {
  const int s = detail::find_sector(link.sectors, piece, p);
  if (s < 0 || norm(dir) == 0.0) return std::nullopt;
  const Sector& sec = link.sectors[s];
  double off = ccw_angle(sec.start_dir, dir);
  if (off > sec.angle + 1e-7) {
    // Round-off just clockwise of the start direction.
    if (off > 2.0 * kPi - 1e-7) off = 0.0;
    else return std::nullopt;
  }
  return LinkDirection{s, std::fmin(off, sec.angle)};
}

// A boundary point class whose link is worth reporting, labelled by one of
// its pre-images.
struct LinkSite {
  int node = -1;  // node in the discretization, or -1
  int piece = -1;
  Vec2 point;
  std::string label;
};

// Breakpoint classes (corners and arc ends on E), one generic interior class
// per arc, and piece corners off E.
inline std::vector<LinkSite> link_sites(const DiscretizedComplex& dc) {
  const ComplexSpec& spec = dc.spec();
  std::vector<LinkSite> out;
  std::vector<char> taken(dc.node_count(), 0);
  auto label = [&](int piece, Vec2 p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s:%.6g,%.6g", spec.pieces[piece].id.c_str(), p.x, p.y);
    return std::string(buf);
  };
  auto add_node = [&](int node) {
    if (node < 0 || taken[node]) return;
    taken[node] = 1;
    const Rep& r = dc.node(node).reps.front();
    out.push_back({node, r.piece, r.pos, label(r.piece, r.pos)});
  };
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
    const auto& samples = dc.arc_samples(static_cast<int>(a));
    for (double t : spec.arc_breakpoints(static_cast<int>(a)))
      for (const auto& [st, node] : samples)
        if (std::abs(st - t) <= kMergeTolerance) add_node(node);
  }
  std::vector<char> generic_done(spec.gluings.size(), 0);
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
    const auto& samples = dc.arc_samples(static_cast<int>(a));
    const double len = spec.arc_length(static_cast<int>(a));
    // The sample closest to a quarter of the arc avoids fold fixed points.
    int best = -1;
    double gap = kInfinity;
    for (const auto& [st, node] : samples) {
      bool corner = false;
      for (double t : spec.arc_breakpoints(static_cast<int>(a))) corner |= std::abs(st - t) <= kMergeTolerance;
      if (!corner && std::abs(st - 0.25 * len) < gap) {
        gap = std::abs(st - 0.25 * len);
        best = node;
      }
    }
    // One generic class per gluing class is enough.
    const int g = spec.arc_class(static_cast<int>(a)).first;
    if (best < 0 || (g >= 0 && generic_done[g])) continue;
    if (g >= 0) generic_done[g] = 1;
    add_node(best);
  }
  for (std::size_t p = 0; p < spec.pieces.size(); ++p) {
    if (spec.pieces[p].kind != PieceKind::Polygon) continue;
    for (const Vec2& v : spec.pieces[p].vertices) {
      bool on_e = false;
      for (const auto& [node, pos] : dc.piece_nodes(static_cast<int>(p))) on_e |= dist(pos, v) <= 1e-7;
      if (!on_e) out.push_back({-1, static_cast<int>(p), v, label(static_cast<int>(p), v)});
    }
  }
  return out;
}

}  // namespace gluing
