#pragma once

#include <random>

#include "qwcage/spectrum.hpp"
#include "qwcage/walk.hpp"

namespace qwcage::test {

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  double angle() { return std::uniform_real_distribution<double>(-kPi, kPi)(gen); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
};

inline CoinAssignment dc_coins(const std::string& hub, const CoinParamsU2& b,
                               const CoinParamsU2& c) {
  CoinAssignment coins;
  coins.hub = CoinSpec::parse(hub);
  coins.rim_b = CoinSpec::make_u2(b);
  coins.rim_c = CoinSpec::make_u2(c);
  return coins;
}

/// Hub coin `hub`, rim coins U2(theta,phi,0,beta) and U2(theta,phi,omega,beta).
inline CoinAssignment dc_family(const std::string& hub, double theta, double phi,
                                double omega, double beta) {
  return dc_coins(hub, {theta, phi, 0, beta}, {theta, phi, omega, beta});
}

inline CoinAssignment t3_coins(const CoinParamsR3& b, const CoinParamsR3& c) {
  CoinAssignment coins;
  coins.hub = CoinSpec::parse("G6");
  coins.rim_b = CoinSpec::make_r3(b);
  coins.rim_c = CoinSpec::make_r3(c);
  return coins;
}

inline CoinAssignment t3_family(double alpha, double gamma, double omega = 0) {
  return t3_coins({alpha, gamma, 0}, {alpha, gamma, omega});
}

inline constexpr double kGamma3 = 0.6154797086703873;  // asin(1/sqrt 3)

}  // namespace qwcage::test
