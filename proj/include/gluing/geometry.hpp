#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace gluing {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
inline Vec2 lerp(Vec2 a, Vec2 b, double s) { return a + (b - a) * s; }

// Counterclockwise rotation.
inline Vec2 rotated(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Angle in [0, 2pi) swept counterclockwise from `from` to `to`.
inline double ccw_angle(Vec2 from, Vec2 to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Unsigned angle between two nonzero vectors, in [0, pi].
inline double angle_between(Vec2 a, Vec2 b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

// Distance from p to the closed segment [a, b], and the segment parameter in [0, 1].
inline double segment_distance(Vec2 p, Vec2 a, Vec2 b, double* param = nullptr) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::fmin(1.0, std::fmax(0.0, s));
  if (param) *param = s;
  return dist(p, a + ab * s);
}

inline double polygon_area(std::span<const Vec2> poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

// True when p is inside (or within eps of) a counterclockwise convex polygon.
inline bool convex_contains(std::span<const Vec2> poly, Vec2 p, double eps = 1e-9) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    const Vec2 e = b - a;
    if (cross(e, p - a) < -eps * norm(e)) return false;
  }
  return true;
}

// Largest r >= 0 with origin + r*dir still inside the convex polygon (origin inside).
inline double convex_ray_exit(std::span<const Vec2> poly, Vec2 origin, Vec2 dir) {
  double best = INFINITY;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    const Vec2 inward = rotated(normalized(b - a), kPi / 2);
    const double rate = dot(dir, inward);
    if (rate >= -1e-15) continue;
    const double slack = dot(origin - a, inward);
    best = std::fmin(best, std::fmax(0.0, slack) / -rate);
  }
  return best;
}

}  // namespace gluing
