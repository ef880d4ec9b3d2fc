#pragma once

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>

#include "stablesup/signed_log.hpp"

namespace stablesup {

/// Absolute tolerance deciding that a gamma argument sits on a pole.
/// Admissible irrational alpha keeps genuine arguments further away;
/// anything closer indicates a near-rational alpha and surfaces as an
/// error rather than a huge value.
inline constexpr double kPoleTol = 1e-12;

/// sin(pi*y) decomposed as parity * sin(pi*frac), frac in [0,1).
/// Produced either from a plain double or, for y = l*x with exactly
/// known x, by the diophantine reduction machinery.
struct ReducedAngle {
  double frac = 0.0;
  int parity = 1;             // sign of sin over the reduced period
  bool exact_integer = false; // y integral in the exact representation
};

namespace detail {

template <class Real>
Real lgamma_positive(Real x) {
  if constexpr (std::is_same_v<Real, double>) {
    return std::lgamma(x);
  } else {
    return boost::math::lgamma(x);
  }
}

// y -> (frac, parity of floor(y)); works for double and cpp_bin_float.
template <class Real>
void split_unit(const Real& y, Real& frac, int& parity) {
  using std::floor;
  Real fl = floor(y);
  frac = y - fl;
  if (frac >= Real(1)) {  // guard against floor rounding at the edge
    frac -= Real(1);
    fl += Real(1);
  }
  Real half = fl / 2;
  parity = (half == floor(half)) ? 1 : -1;
}

}  // namespace detail

/// sin(pi * (n + frac)) with n of the given parity, in signed-log form.
template <class Real>
SignedLog<Real> sinpi_reduced(Real frac, int parity, bool exact_integer) {
  using std::log;
  using std::sin;
  if (exact_integer || frac == 0) return SignedLog<Real>::zero();
  const Real pi = boost::math::constants::pi<Real>();
  Real t = (frac <= Real(0.5)) ? frac : Real(1) - frac;
  Real s = sin(pi * t);
  return {parity, Real(log(s))};
}

/// sin(pi*y) for a plain floating argument.  Exact zero is reported only
/// when y is integral in its own representation.
template <class Real>
SignedLog<Real> sinpi_signed(const Real& y) {
  Real frac;
  int parity;
  detail::split_unit(y, frac, parity);
  return sinpi_reduced<Real>(frac, parity, frac == 0);
}

inline SignedLogValue sinpi_signed(double y, const std::optional<ReducedAngle>& exact) {
  if (exact) return sinpi_reduced<double>(exact->frac, exact->parity, exact->exact_integer);
  return sinpi_signed<double>(y);
}

/// Gamma(x) with sign, by reflection for x < 0.  Arguments within
/// kPoleTol of a nonpositive integer raise errc::gamma_pole carrying the
/// pole index k (x ~ -k).
template <class Real>
SignedLog<Real> log_gamma_signed(const Real& x) {
  using std::abs;
  using std::log;
  if (x < Real(0.5)) {
    using std::round;
    Real nearest = round(x);
    if (nearest <= Real(0) && abs(x - nearest) < Real(kPoleTol)) {
      long long k = static_cast<long long>(-nearest);
      raise(errc::gamma_pole, "gamma argument within 1e-12 of pole", k);
    }
  }
  if (x > Real(0)) {
    return {1, detail::lgamma_positive<Real>(x)};
  }
  // reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x))
  const Real pi = boost::math::constants::pi<Real>();
  SignedLog<Real> s = sinpi_signed<Real>(x);
  Real la = Real(log(pi)) - s.logabs - detail::lgamma_positive<Real>(Real(1) - x);
  return {s.sign, la};
}

}  // namespace stablesup
