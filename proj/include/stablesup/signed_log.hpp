#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "stablesup/errors.hpp"

namespace stablesup {

/// A real number stored as sign and natural log of absolute value.
/// Products of gammas and sines overflow doubles long before the series
/// they feed converges; in this form multiplication is addition and only
/// the final sum is exponentiated.
///
/// Zero is a distinguished sign state (sign == 0); logabs is then
/// meaningless and never read.  No value is ever encoded as logabs = -inf.
template <class Real = double>
struct SignedLog {
  int sign = 0;
  Real logabs = Real(0);

  static SignedLog zero() { return {0, Real(0)}; }
  static SignedLog one() { return {1, Real(0)}; }

  static SignedLog from_value(Real v) {
    if (v == 0) return zero();
    using std::log;
    using std::abs;
    return {v > 0 ? 1 : -1, Real(log(abs(v)))};
  }

  static SignedLog from_log(int s, Real la) {
    if (s == 0) return zero();
    return {s > 0 ? 1 : -1, la};
  }

  bool is_zero() const { return sign == 0; }

  /// Round-trip to an ordinary value; overflows to +-inf past the
  /// exponent range of Real.
  Real value() const {
    if (sign == 0) return Real(0);
    using std::exp;
    return Real(sign) * exp(logabs);
  }

  SignedLog negate() const { return {-sign, logabs}; }
};

using SignedLogValue = SignedLog<double>;

template <class Real>
SignedLog<Real> slv_mul(const SignedLog<Real>& a, const SignedLog<Real>& b) {
  if (a.sign == 0 || b.sign == 0) return SignedLog<Real>::zero();
  return {a.sign * b.sign, a.logabs + b.logabs};
}

template <class Real>
SignedLog<Real> slv_div(const SignedLog<Real>& a, const SignedLog<Real>& b) {
  if (b.sign == 0) raise(errc::division_by_zero, "signed-log division by zero");
  if (a.sign == 0) return SignedLog<Real>::zero();
  return {a.sign * b.sign, a.logabs - b.logabs};
}

/// Signed log-sum-exp over a sequence of terms.  The largest logabs is
/// factored out and the rescaled terms are added with Neumaier
/// compensation, so any permutation of the input agrees to a few
/// working-precision epsilons.  Exact cancellation yields the zero state.
template <class Real>
SignedLog<Real> slv_accumulate(const std::vector<SignedLog<Real>>& terms) {
  using std::abs;
  using std::exp;
  using std::log;
  Real lmax(0);
  bool any = false;
  for (const auto& t : terms) {
    if (t.sign == 0) continue;
    if (!any || t.logabs > lmax) lmax = t.logabs;
    any = true;
  }
  if (!any) return SignedLog<Real>::zero();

  Real sum(0), comp(0);
  for (const auto& t : terms) {
    if (t.sign == 0) continue;
    Real x = Real(t.sign) * exp(t.logabs - lmax);
    Real s = sum + x;
    if (abs(sum) >= abs(x))
      comp += (sum - s) + x;
    else
      comp += (x - s) + sum;
    sum = s;
  }
  sum += comp;
  if (sum == 0) return SignedLog<Real>::zero();
  return {sum > 0 ? 1 : -1, Real(log(abs(sum))) + lmax};
}

/// Two-term sum without materializing a vector.
template <class Real>
SignedLog<Real> slv_add(const SignedLog<Real>& a, const SignedLog<Real>& b) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::log1p;
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const SignedLog<Real>& hi = (a.logabs >= b.logabs) ? a : b;
  const SignedLog<Real>& lo = (a.logabs >= b.logabs) ? b : a;
  Real r = exp(lo.logabs - hi.logabs);  // in (0, 1]
  Real body = Real(1) + Real(hi.sign * lo.sign) * r;
  if (body == 0) return SignedLog<Real>::zero();
  return {body > 0 ? hi.sign : -hi.sign, hi.logabs + Real(log(abs(body)))};
}

}  // namespace stablesup
