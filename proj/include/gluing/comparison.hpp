#pragma once

// Model-space trigonometry for the plane of constant curvature kappa.
//
// Everything here is a pure function of its arguments. For kappa != 0 the
// formulas are written in terms of rho_kappa(t) = (1 - cs_kappa(t)) / kappa,
// which is computed without cancellation, so results stay accurate as
// kappa -> 0 and match the Euclidean formulas in the limit.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "gluing/geometry.hpp"

namespace gluing {

// Raised when an arccos argument leaves [-1, 1] by more than roundoff.
class NumericInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kArccosGuard = 1e-12;

struct Curvature {
  double kappa = 0.0;

  // pi / sqrt(kappa) for kappa > 0, +inf otherwise.
  double diameter_bound() const {
    return kappa > 0.0 ? kPi / std::sqrt(kappa) : std::numeric_limits<double>::infinity();
  }
};

inline double sn(double kappa, double t) {
  if (kappa > 0.0) {
    const double u = std::sqrt(kappa);
    return std::sin(u * t) / u;
  }
  if (kappa < 0.0) {
    const double u = std::sqrt(-kappa);
    return std::sinh(u * t) / u;
  }
  return t;
}

inline double cs(double kappa, double t) {
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * t);
  if (kappa < 0.0) return std::cosh(std::sqrt(-kappa) * t);
  return 1.0;
}

inline double tg(double kappa, double t) {
  const double c = cs(kappa, t);
  if (c == 0.0 || (kappa > 0.0 && std::abs(c) < 1e-15))
    throw std::domain_error("tg: cs_kappa vanishes at t = " + std::to_string(t));
  return sn(kappa, t) / c;
}

// rho_kappa(t) = integral_0^t sn_kappa(v) dv.
inline double rho(double kappa, double t) {
  if (t < 0.0) throw std::domain_error("rho: t must be nonnegative");
  if (kappa > 0.0) {
    const double s = std::sin(0.5 * std::sqrt(kappa) * t);
    return 2.0 * s * s / kappa;
  }
  if (kappa < 0.0) {
    const double s = std::sinh(0.5 * std::sqrt(-kappa) * t);
    return 2.0 * s * s / -kappa;
  }
  return 0.5 * t * t;
}

// Inverse of rho_kappa on [0, D_kappa].
inline double rho_inverse(double kappa, double value) {
  value = std::fmax(0.0, value);
  if (kappa > 0.0) {
    const double u = std::sqrt(kappa);
    const double s = std::sqrt(kappa * value / 2.0);
    return 2.0 * std::asin(std::fmin(1.0, s)) / u;
  }
  if (kappa < 0.0) {
    const double u = std::sqrt(-kappa);
    return 2.0 * std::asinh(std::sqrt(-kappa * value / 2.0)) / u;
  }
  return std::sqrt(2.0 * value);
}

// Side lengths (A; B, C): A is opposite the vertex whose angle is wanted.
class TriangleSides {
 public:
  TriangleSides(double a, double b, double c) : a_(a), b_(b), c_(c) {
    if (!(a >= 0.0 && b >= 0.0 && c >= 0.0))
      throw std::invalid_argument("TriangleSides: lengths must be nonnegative");
    if (!satisfies_triangle_inequality(a, b, c))
      throw std::invalid_argument("TriangleSides: triangle inequality violated");
  }

  // Returns nullopt instead of throwing.
  static std::optional<TriangleSides> make(double a, double b, double c) {
    if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) return std::nullopt;
    if (!satisfies_triangle_inequality(a, b, c)) return std::nullopt;
    return TriangleSides(a, b, c, Unchecked{});
  }

  static bool satisfies_triangle_inequality(double a, double b, double c) {
    const double slack = 1e-12 * (a + b + c);
    return a <= b + c + slack && b <= a + c + slack && c <= a + b + slack;
  }

  double A() const { return a_; }
  double B() const { return b_; }
  double C() const { return c_; }

 private:
  struct Unchecked {};
  TriangleSides(double a, double b, double c, Unchecked) : a_(a), b_(b), c_(c) {}
  double a_, b_, c_;
};

namespace detail {

inline double guarded_acos(double arg, double magnitude) {
  const double guard = kArccosGuard * std::fmax(1.0, magnitude);
  if (arg > 1.0 + guard || arg < -1.0 - guard || std::isnan(arg))
    throw NumericInconsistency("arccos argument " + std::to_string(arg) + " outside [-1, 1]");
  return std::acos(std::fmin(1.0, std::fmax(-1.0, arg)));
}

// Third side opposite the angle `alpha` between sides b and c in the model plane.
inline double law_of_cosines(double kappa, double b, double c, double alpha) {
  if (kappa == 0.0) {
    const double sq = b * b + c * c - 2.0 * b * c * std::cos(alpha);
    return std::sqrt(std::fmax(0.0, sq));
  }
  const double rb = rho(kappa, b), rc = rho(kappa, c);
  const double value = rb + rc - kappa * rb * rc - sn(kappa, b) * sn(kappa, c) * std::cos(alpha);
  return rho_inverse(kappa, value);
}

}  // namespace detail

// The kappa-comparison angle at the vertex opposite side A. Zero for
// degenerate input (B*C == 0, or perimeter >= 2 D_kappa when kappa > 0).
inline double comparison_angle(double kappa, const TriangleSides& s) {
  const double a = s.A(), b = s.B(), c = s.C();
  if (b * c <= 0.0) return 0.0;
  if (kappa == 0.0) {
    const double num = b * b + c * c - a * a;
    const double den = 2.0 * b * c;
    return detail::guarded_acos(num / den, (b * b + c * c + a * a) / den);
  }
  if (kappa > 0.0 && a + b + c >= 2.0 * Curvature{kappa}.diameter_bound()) return 0.0;
  // (cs A - cs B cs C) / (kappa sn B sn C), rewritten through rho.
  const double ra = rho(kappa, a), rb = rho(kappa, b), rc = rho(kappa, c);
  const double den = sn(kappa, b) * sn(kappa, c);
  if (den <= 0.0) return 0.0;
  const double num = rb + rc - ra - kappa * rb * rc;
  const double magnitude = (ra + rb + rc + std::abs(kappa * rb * rc)) / den;
  return detail::guarded_acos(num / den, magnitude);
}

inline double comparison_angle(double kappa, double a, double b, double c) {
  return comparison_angle(kappa, TriangleSides(a, b, c));
}

// Distance in the kappa-cone between (a, xi) and (b, eta) with |xi eta| = sigma.
inline double cone_distance(double kappa, double a, double sigma, double b) {
  const double half = 0.5 * Curvature{kappa}.diameter_bound();
  if (!(a >= 0.0 && a < half && b >= 0.0 && b < half))
    throw std::domain_error("cone_distance: radii must lie in [0, D_kappa / 2)");
  if (sigma < 0.0) throw std::domain_error("cone_distance: negative base angle");
  return detail::law_of_cosines(kappa, a, b, std::fmin(sigma, kPi));
}

// The side A with comparison_angle(kappa, (A; B, C)) == alpha.
inline double model_side(double kappa, double b, double c, double alpha) {
  const double d = Curvature{kappa}.diameter_bound();
  if (!(alpha >= 0.0 && alpha <= kPi)) throw std::domain_error("model_side: angle outside [0, pi]");
  if (!(b >= 0.0 && b < d && c >= 0.0 && c < d))
    throw std::domain_error("model_side: sides must lie in [0, D_kappa)");
  const double a = detail::law_of_cosines(kappa, b, c, alpha);
  if (kappa > 0.0 && b * c > 0.0 && a + b + c >= 2.0 * d)
    throw std::domain_error("model_side: no triangle with these data in the model plane");
  return a;
}

}  // namespace gluing
