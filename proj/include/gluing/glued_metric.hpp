#pragma once

// The glued length metric, computed through crossing sequences.
//
// The glued set E is sampled at spacing <= h and samples identified by the
// gluing are merged into node classes. Because every piece is convex, the
// cheapest way between two points of one piece is the straight chord, so the
// glued distance is a shortest path in the graph whose nodes are the classes
// and whose edge weights are chords between representatives sharing a piece.
// Query points off the sample set are attached to the graph per call.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gluing/complex.hpp"
#include "gluing/parallel.hpp"
#include "gluing/validate.hpp"

namespace gluing {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kMergeTolerance = 1e-9;

// A point given in the coordinates of one piece.
struct PiecePoint {
  int piece = -1;
  Vec2 pos;
};

struct Rep {
  int piece = -1;
  Vec2 pos;
};

struct NodeClass {
  int id = -1;
  std::vector<Rep> reps;
  std::vector<ArcPoint> arc_points;
  bool on_e = true;
};

// A located query: all pre-images of the point, and its node id when the
// point coincides with a sample class.
struct QueryPoint {
  std::vector<Rep> reps;
  int node = -1;
  bool on_e = false;
};

struct Measured {
  double value = kInfinity;
  double error_bound = kInfinity;
  int crossings = 0;
};

// Distances from one query point to every node class. crossings[v] counts the
// classes visited up to and including v (v itself is not counted when it is
// the source's own class).
struct DistanceField {
  std::vector<double> value;
  std::vector<int> crossings;
};

struct PathLeg {
  int piece = -1;
  Vec2 from;
  Vec2 to;
  double length() const { return dist(from, to); }
};

struct GeodesicPath {
  double total_length = 0.0;
  std::vector<PathLeg> legs;
  std::vector<int> crossings;

  // The point at arclength s from the start (clamped to the path).
  PiecePoint point_at(double s) const {
    double acc = 0.0;
    for (const PathLeg& leg : legs) {
      const double len = leg.length();
      if (s <= acc + len || &leg == &legs.back()) {
        const double u = len > 0.0 ? std::fmin(1.0, std::fmax(0.0, (s - acc) / len)) : 0.0;
        return {leg.piece, lerp(leg.from, leg.to, u)};
      }
      acc += len;
    }
    return {legs.front().piece, legs.front().from};
  }
};

namespace detail {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

inline bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); }

// (value, crossings) lexicographic order with a relative tie window.
inline bool better(double v, int k, double best_v, int best_k) {
  if (v < best_v && !nearly_equal(v, best_v)) return true;
  return nearly_equal(v, best_v) && k < best_k;
}

// Uniform subdivision of every gap between sorted breakpoints into steps <= h.
inline std::vector<double> subdivide(const std::vector<double>& breaks, double h) {
  std::vector<double> out{breaks.front()};
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double a = breaks[i - 1], b = breaks[i];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
    for (int k = 1; k < n; ++k) out.push_back(a + (b - a) * k / n);
    out.push_back(b);
  }
  return out;
}

inline std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > kMergeTolerance) out.push_back(x);
  return out;
}

}  // namespace detail

class DiscretizedComplex {
 public:
  DiscretizedComplex(const ComplexSpec& spec, double h) : spec_(std::make_shared<const ComplexSpec>(spec)), h_(h) {
    if (!(h > 0.0)) throw std::invalid_argument("discretize: spacing must be positive");
    const ValidationReport rep = validate(spec);
    if (rep.status() == ValidationStatus::Invalid) {
      for (const Finding& f : rep.findings)
        if (f.severity == Severity::Error) throw std::invalid_argument("discretize: invalid scene (" + f.code + ": " + f.message + ")");
    }
    for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
      const double len = spec.arc_length(static_cast<int>(a));
      if (len > kLengthTolerance && h > len + kLengthTolerance)
        throw std::invalid_argument("discretize: spacing exceeds the shortest arc (" + spec.arcs[a].id + ")");
    }
    build_samples();
    build_weights();
    build_all_pairs();
  }

  const ComplexSpec& spec() const { return *spec_; }
  double h() const { return h_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NodeClass>& nodes() const { return nodes_; }
  const NodeClass& node(int id) const { return nodes_.at(id); }

  // Sample parameters of an arc with their node ids, sorted by parameter.
  const std::vector<std::pair<double, int>>& arc_samples(int arc) const { return arc_samples_.at(arc); }

  // Nodes with a representative on the piece.
  const std::vector<std::pair<int, Vec2>>& piece_nodes(int piece) const { return piece_reps_.at(piece); }

  double weight(int u, int v) const { return weights_[index(u, v)]; }
  double node_distance(int u, int v) const { return apsp_[index(u, v)]; }
  int node_hops(int u, int v) const { return hops_[index(u, v)]; }

  // Resolves a point of a piece to its class in the glued space.
  QueryPoint locate(PiecePoint pp) const {
    if (pp.piece < 0 || pp.piece >= static_cast<int>(spec_->pieces.size()))
      throw std::domain_error("locate: unknown piece index " + std::to_string(pp.piece));
    if (!spec_->pieces[pp.piece].contains(pp.pos, 1e-9))
      throw std::domain_error("locate: point lies outside piece " + spec_->pieces[pp.piece].id);

    std::vector<ArcPoint> frontier = spec_->arcs_through(pp.piece, pp.pos);
    QueryPoint q;
    if (frontier.empty()) {
      q.reps.push_back({pp.piece, pp.pos});
      return q;
    }
    std::vector<ArcPoint> seen;
    auto visited = [&](ArcPoint a) {
      return std::any_of(seen.begin(), seen.end(),
                         [&](ArcPoint b) { return b.arc == a.arc && std::abs(b.t - a.t) <= kMergeTolerance; });
    };
    q.on_e = true;
    while (!frontier.empty()) {
      const ArcPoint a = frontier.back();
      frontier.pop_back();
      if (visited(a)) continue;
      seen.push_back(a);
      const int hit = sample_at(a);
      if (hit >= 0) {
        QueryPoint nq;
        nq.reps = nodes_[hit].reps;
        nq.node = hit;
        nq.on_e = true;
        return nq;
      }
      const int piece = spec_->arcs[a.arc].piece;
      const Vec2 pos = spec_->arc_point(a.arc, a.t);
      add_rep(q.reps, {piece, pos});
      for (const ArcPoint& img : spec_->glued_images(a)) {
        const int ip = spec_->arcs[img.arc].piece;
        for (const ArcPoint& b : spec_->arcs_through(ip, spec_->arc_point(img.arc, img.t)))
          if (!visited(b)) frontier.push_back(b);
      }
    }
    return q;
  }

  QueryPoint node_query(int id) const {
    QueryPoint q;
    q.reps = nodes_.at(id).reps;
    q.node = id;
    q.on_e = true;
    return q;
  }

  DistanceField field(const QueryPoint& x) const {
    const int n = node_count();
    DistanceField f{std::vector<double>(n, kInfinity), std::vector<int>(n, 0)};
    if (x.node >= 0) {
      for (int v = 0; v < n; ++v) {
        f.value[v] = apsp_[index(x.node, v)];
        f.crossings[v] = hops_[index(x.node, v)] + (v == x.node ? 0 : 1);
      }
      return f;
    }
    for (const Rep& r : x.reps) {
      for (const auto& [u, pu] : piece_reps_[r.piece]) {
        const double base = dist(r.pos, pu);
        const double* row = &apsp_[index(u, 0)];
        const std::int32_t* hrow = &hops_[index(u, 0)];
        for (int v = 0; v < n; ++v) {
          const double cand = base + row[v];
          const int k = hrow[v] + (u == v ? 1 : 2);
          if (detail::better(cand, k, f.value[v], f.crossings[v]) || f.value[v] == kInfinity) {
            if (cand < kInfinity) {
              f.value[v] = cand;
              f.crossings[v] = k;
            }
          }
        }
      }
    }
    return f;
  }

  // Distance from the source of `fx` to y.
  Measured measure(const DistanceField& fx, const QueryPoint& x, const QueryPoint& y) const {
    if (x.node >= 0 && x.node == y.node) return {0.0, 0.0, 0};
    double best = kInfinity;
    int k = 0;
    for (const Rep& rx : x.reps)
      for (const Rep& ry : y.reps)
        if (rx.piece == ry.piece) {
          const double d = dist(rx.pos, ry.pos);
          if (detail::better(d, 0, best, k)) {
            best = d;
            k = 0;
          }
        }
    if (y.node >= 0) {
      const double cand = fx.value[y.node];
      if (detail::better(cand, fx.crossings[y.node] - 1, best, k)) {
        best = cand;
        k = fx.crossings[y.node] - 1;
      }
    } else {
      for (const Rep& ry : y.reps)
        for (const auto& [v, pv] : piece_reps_[ry.piece]) {
          const double cand = fx.value[v] + dist(pv, ry.pos);
          if (detail::better(cand, fx.crossings[v], best, k)) {
            best = cand;
            k = fx.crossings[v];
          }
        }
    }
    Measured m;
    m.value = best;
    m.crossings = k;
    m.error_bound = best == 0.0 ? 0.0 : (best < kInfinity ? (k + 1) * h_ : kInfinity);
    return m;
  }

  // The fixed argument order used for every pairwise query.
  static bool precedes(const QueryPoint& a, const QueryPoint& b) {
    auto key = [](const QueryPoint& q) {
      const Rep& r = q.reps.front();
      return std::tuple(q.node < 0 ? 1 : 0, q.node, r.piece, r.pos.x, r.pos.y);
    };
    return key(a) < key(b);
  }

  Measured distance(const QueryPoint& x, const QueryPoint& y) const {
    // Fixed argument order keeps the result exactly symmetric.
    if (precedes(y, x)) return distance(y, x);
    return measure(field(x), x, y);
  }

  Measured distance(PiecePoint x, PiecePoint y) const { return distance(locate(x), locate(y)); }

  // Shortest crossing sequence with at most m intermediate classes.
  double predistance(const QueryPoint& x, const QueryPoint& y, int m) const {
    if (m < 0) throw std::invalid_argument("predistance: negative hop bound");
    if (x.node >= 0 && x.node == y.node) return 0.0;
    double best = direct_chord(x, y);
    if (m == 0) return best;
    const int n = node_count();
    std::vector<double> layer = chords_to_nodes(x);
    const std::vector<double> exit = chords_to_nodes(y);
    std::vector<double> next(n);
    for (int hop = 1;; ++hop) {
      for (int v = 0; v < n; ++v) best = std::fmin(best, layer[v] + exit[v]);
      if (hop == m) break;
      for (int v = 0; v < n; ++v) {
        double b = layer[v];
        for (int u = 0; u < n; ++u) b = std::fmin(b, layer[u] + weights_[index(u, v)]);
        next[v] = b;
      }
      if (next == layer) break;
      layer.swap(next);
    }
    return best;
  }

  double predistance(PiecePoint x, PiecePoint y, int m) const { return predistance(locate(x), locate(y), m); }

  // A path realizing the graph distance. Ties prefer fewer crossings, then
  // smaller node ids.
  GeodesicPath shortest_path(const QueryPoint& x, const QueryPoint& y) const {
    const int n = node_count();
    std::vector<double> d(n, kInfinity);
    std::vector<int> hops(n, 0), pred(n, -1);
    std::vector<char> done(n, 0);
    if (x.node >= 0) {
      d[x.node] = 0.0;
    } else {
      for (const Rep& r : x.reps)
        for (const auto& [v, pv] : piece_reps_[r.piece]) {
          const double c = dist(r.pos, pv);
          if (detail::better(c, 1, d[v], hops[v]) || d[v] == kInfinity) {
            d[v] = c;
            hops[v] = 1;
          }
        }
    }
    for (int it = 0; it < n; ++it) {
      int u = -1;
      for (int v = 0; v < n; ++v)
        if (!done[v] && d[v] < kInfinity && (u < 0 || detail::better(d[v], hops[v], d[u], hops[u]))) u = v;
      if (u < 0) break;
      done[u] = 1;
      for (int v = 0; v < n; ++v) {
        if (done[v]) continue;
        const double nd = d[u] + weights_[index(u, v)];
        if (nd < kInfinity && (detail::better(nd, hops[u] + 1, d[v], hops[v]) || d[v] == kInfinity)) {
          d[v] = nd;
          hops[v] = hops[u] + 1;
          pred[v] = u;
        }
      }
    }

    double best = direct_chord(x, y);
    int best_k = 0, last = -1;
    if (y.node >= 0 && !(x.node >= 0 && x.node == y.node)) {
      if (d[y.node] < kInfinity && detail::better(d[y.node], hops[y.node] - 1, best, best_k)) {
        best = d[y.node];
        best_k = hops[y.node] - 1;
        last = pred[y.node];
        if (last < 0 && x.node < 0) last = y.node;  // reached directly from x's seeds
      }
    } else if (y.node < 0) {
      const std::vector<double> exit = chords_to_nodes(y);
      for (int v = 0; v < n; ++v) {
        const double cand = d[v] + exit[v];
        if (cand < kInfinity && detail::better(cand, hops[v], best, best_k)) {
          best = cand;
          best_k = hops[v];
          last = v;
        }
      }
    }
    if (best == kInfinity) throw std::runtime_error("shortest_path: points are not connected");

    std::vector<int> chain;
    for (int v = last; v >= 0; v = pred[v]) chain.push_back(v);
    std::reverse(chain.begin(), chain.end());
    if (!chain.empty() && x.node >= 0 && chain.front() == x.node) chain.erase(chain.begin());
    if (!chain.empty() && y.node >= 0 && chain.back() == y.node) chain.pop_back();

    std::vector<const std::vector<Rep>*> stops{&x.reps};
    for (int v : chain) stops.push_back(&nodes_[v].reps);
    stops.push_back(&y.reps);
    GeodesicPath path;
    path.crossings = chain;
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
      PathLeg leg;
      double len = kInfinity;
      for (const Rep& a : *stops[i])
        for (const Rep& b : *stops[i + 1])
          if (a.piece == b.piece && dist(a.pos, b.pos) < len) {
            len = dist(a.pos, b.pos);
            leg = {a.piece, a.pos, b.pos};
          }
      path.legs.push_back(leg);
      path.total_length += len;
    }
    return path;
  }

  GeodesicPath shortest_path(PiecePoint x, PiecePoint y) const { return shortest_path(locate(x), locate(y)); }

 private:
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(u) * nodes_.size() + v; }

  static void add_rep(std::vector<Rep>& reps, Rep r) {
    for (const Rep& o : reps)
      if (o.piece == r.piece && dist(o.pos, r.pos) <= kMergeTolerance) return;
    reps.push_back(r);
  }

  int sample_at(ArcPoint a) const {
    const auto& s = arc_samples_[a.arc];
    auto it = std::lower_bound(s.begin(), s.end(), a.t - kMergeTolerance,
                               [](const std::pair<double, int>& e, double t) { return e.first < t; });
    if (it != s.end() && std::abs(it->first - a.t) <= kMergeTolerance) return it->second;
    return -1;
  }

  double direct_chord(const QueryPoint& x, const QueryPoint& y) const {
    double best = kInfinity;
    for (const Rep& rx : x.reps)
      for (const Rep& ry : y.reps)
        if (rx.piece == ry.piece) best = std::fmin(best, dist(rx.pos, ry.pos));
    return best;
  }

  // Chord length from the point to every node sharing a piece with it.
  std::vector<double> chords_to_nodes(const QueryPoint& q) const {
    std::vector<double> out(nodes_.size(), kInfinity);
    for (const Rep& r : q.reps)
      for (const auto& [v, pv] : piece_reps_[r.piece]) out[v] = std::fmin(out[v], dist(r.pos, pv));
    return out;
  }

  void build_samples() {
    const ComplexSpec& spec = *spec_;
    const int na = static_cast<int>(spec.arcs.size());
    std::vector<std::vector<double>> params(na);
    std::vector<int> offset(na + 1, 0);
    struct Link {
      int arc_a, arc_b;
      bool mirror;  // pair index j with (count - 1 - j)
    };
    std::vector<Link> links;

    std::vector<char> assigned(na, 0);
    for (const GluingClass& gc : spec.gluings) {
      const int a0 = gc.members.front().arc;
      const double len = spec.arc_length(a0);
      std::vector<double> canon;
      if (len <= kLengthTolerance) {
        canon = {0.0};
      } else if (gc.self_fold) {
        std::vector<double> breaks{0.5 * len};
        for (double t : spec.arc_breakpoints(a0)) {
          const double s = t <= 0.5 * len ? t : len - t;
          breaks.push_back(s);
        }
        const std::vector<double> half = detail::subdivide(detail::sorted_unique(breaks), h_);
        canon = half;
        for (int j = static_cast<int>(half.size()) - 2; j >= 0; --j) canon.push_back(len - half[j]);
      } else {
        std::vector<double> breaks;
        for (const GluingMember& m : gc.members)
          for (double t : spec.arc_breakpoints(m.arc))
            breaks.push_back(m.reversed ? spec.arc_length(m.arc) - t : t);
        canon = detail::subdivide(detail::sorted_unique(breaks), h_);
      }
      for (const GluingMember& m : gc.members) {
        const double lm = spec.arc_length(m.arc);
        std::vector<double>& p = params[m.arc];
        p.clear();
        for (double s : canon) p.push_back(std::fmin(lm, std::fmax(0.0, m.reversed ? lm - s : s)));
        assigned[m.arc] = 1;
      }
      for (std::size_t k = 1; k < gc.members.size(); ++k)
        links.push_back({gc.members[k - 1].arc, gc.members[k].arc, false});
      if (gc.self_fold) links.push_back({a0, a0, true});
    }
    for (int a = 0; a < na; ++a)
      if (!assigned[a])
        params[a] = spec.arc_length(a) <= kLengthTolerance ? std::vector<double>{0.0}
                                                           : detail::subdivide(spec.arc_breakpoints(a), h_);

    for (int a = 0; a < na; ++a) offset[a + 1] = offset[a] + static_cast<int>(params[a].size());
    const int total = offset[na];
    detail::DisjointSets sets(total);
    // Members of one class store their samples in canonical order, so equal
    // indices are glued; a fold pairs index j with count - 1 - j.
    for (const Link& l : links) {
      const int cnt = static_cast<int>(params[l.arc_a].size());
      for (int j = 0; j < cnt; ++j) sets.unite(offset[l.arc_a] + j, offset[l.arc_b] + (l.mirror ? cnt - 1 - j : j));
    }
    struct Elem {
      int piece;
      Vec2 pos;
      int id;
    };
    std::vector<Elem> elems(total);
    for (int a = 0; a < na; ++a)
      for (std::size_t j = 0; j < params[a].size(); ++j) {
        const int id = offset[a] + static_cast<int>(j);
        elems[id] = {spec.arcs[a].piece, spec.arc_point(a, params[a][j]), id};
      }
    std::vector<Elem> sorted = elems;
    std::sort(sorted.begin(), sorted.end(), [](const Elem& p, const Elem& q) {
      return std::tie(p.piece, p.pos.x, p.pos.y, p.id) < std::tie(q.piece, q.pos.x, q.pos.y, q.id);
    });
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (std::size_t j = i + 1; j < sorted.size(); ++j) {
        if (sorted[j].piece != sorted[i].piece || sorted[j].pos.x - sorted[i].pos.x > kMergeTolerance) break;
        if (dist(sorted[i].pos, sorted[j].pos) <= kMergeTolerance) sets.unite(sorted[i].id, sorted[j].id);
      }

    std::vector<int> node_of_root(total, -1);
    arc_samples_.assign(na, {});
    for (int a = 0; a < na; ++a)
      for (std::size_t j = 0; j < params[a].size(); ++j) {
        const int id = offset[a] + static_cast<int>(j);
        const int root = sets.find(id);
        if (node_of_root[root] < 0) {
          node_of_root[root] = static_cast<int>(nodes_.size());
          nodes_.push_back(NodeClass{static_cast<int>(nodes_.size()), {}, {}, true});
        }
        NodeClass& nc = nodes_[node_of_root[root]];
        add_rep(nc.reps, {elems[id].piece, elems[id].pos});
        nc.arc_points.push_back({a, params[a][j]});
        arc_samples_[a].push_back({params[a][j], nc.id});
      }
    for (auto& s : arc_samples_) std::sort(s.begin(), s.end());

    piece_reps_.assign(spec.pieces.size(), {});
    for (const NodeClass& nc : nodes_)
      for (const Rep& r : nc.reps) piece_reps_[r.piece].push_back({nc.id, r.pos});
  }

  void build_weights() {
    const std::size_t n = nodes_.size();
    weights_.assign(n * n, kInfinity);
    for (std::size_t v = 0; v < n; ++v) weights_[v * n + v] = 0.0;
    for (const auto& reps : piece_reps_)
      for (const auto& [u, pu] : reps)
        for (const auto& [v, pv] : reps) {
          double& w = weights_[index(u, v)];
          w = std::fmin(w, dist(pu, pv));
        }
  }

  void build_all_pairs() {
    const int n = node_count();
    apsp_.assign(static_cast<std::size_t>(n) * n, kInfinity);
    hops_.assign(static_cast<std::size_t>(n) * n, 0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t src) {
      const int s = static_cast<int>(src);
      double* d = &apsp_[index(s, 0)];
      std::int32_t* k = &hops_[index(s, 0)];
      std::vector<char> done(n, 0);
      d[s] = 0.0;
      for (int it = 0; it < n; ++it) {
        int u = -1;
        for (int v = 0; v < n; ++v)
          if (!done[v] && d[v] < kInfinity && (u < 0 || detail::better(d[v], k[v], d[u], k[u]))) u = v;
        if (u < 0) break;
        done[u] = 1;
        const double* w = &weights_[index(u, 0)];
        const int step = u == s ? 0 : 1;
        for (int v = 0; v < n; ++v) {
          if (done[v] || w[v] == kInfinity) continue;
          const double nd = d[u] + w[v];
          if (d[v] == kInfinity || detail::better(nd, k[u] + step, d[v], k[v])) {
            d[v] = nd;
            k[v] = k[u] + step;
          }
        }
      }
    });
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        double& a = apsp_[index(u, v)];
        double& b = apsp_[index(v, u)];
        std::int32_t& ka = hops_[index(u, v)];
        std::int32_t& kb = hops_[index(v, u)];
        if (detail::better(b, kb, a, ka)) {
          a = b;
          ka = kb;
        } else {
          b = a;
          kb = ka;
        }
      }
  }

  std::shared_ptr<const ComplexSpec> spec_;
  double h_;
  std::vector<NodeClass> nodes_;
  std::vector<std::vector<std::pair<double, int>>> arc_samples_;
  std::vector<std::vector<std::pair<int, Vec2>>> piece_reps_;
  std::vector<double> weights_;
  std::vector<double> apsp_;
  std::vector<std::int32_t> hops_;
};

inline DiscretizedComplex discretize(const ComplexSpec& spec, double h) { return DiscretizedComplex(spec, h); }

}  // namespace gluing
