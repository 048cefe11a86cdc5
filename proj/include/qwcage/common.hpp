#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwcage {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Reduce an angle to the principal branch (-pi, pi].
inline double reduce_angle(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y <= -kPi) y += kTwoPi;
  if (y > kPi) y -= kTwoPi;
  return y;
}

/// Reduce a flux to (-1/2, 1/2].
inline double reduce_flux(double f) {
  double y = std::fmod(f, 1.0);
  if (y <= -0.5) y += 1.0;
  if (y > 0.5) y -= 1.0;
  return y;
}

/// Distance between two angles on the circle, in [0, pi].
inline double circ_dist(double a, double b) { return std::abs(reduce_angle(a - b)); }

/// acos with a small tolerance for arguments just outside [-1, 1].
inline double clamped_acos(double x, double tol = 1e-12) {
  if (x > 1.0 + tol || x < -1.0 - tol)
    throw std::domain_error("acos argument out of range: " + std::to_string(x));
  if (x > 1.0) x = 1.0;
  if (x < -1.0) x = -1.0;
  return std::acos(x);
}

/// Max deviation of the optimal order-preserving matching of two equally
/// sized angle multisets on the circle.
double circular_multiset_distance(std::vector<double> a, std::vector<double> b);

/// Circular diameter of a set of angles: 0 iff all values coincide mod 2*pi.
double circular_diameter(std::vector<double> values);

}  // namespace qwcage
