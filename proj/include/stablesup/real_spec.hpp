#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stablesup/errors.hpp"
#include "stablesup/precision.hpp"
#include "stablesup/special.hpp"

namespace stablesup {

/// An exactly specified real number.  Three variants:
///   rational       p/q (decimal literals land here, tagged with their
///                  digit count so the continued fraction expansion can
///                  stop where the literal's resolution ends)
///   surd           (p + q*sqrt(d))/r with d >= 2 non-square, q,r != 0
///   quotient_list  [a0; a1, a2, ...], value = its terminal convergent
///
/// Textual grammar (CLI and config files):
///   1.4142135623   surd:(1+1*sqrt:5)/2   sqrt:2   cf:[1;2,2,2,2]
class RealSpec {
 public:
  enum class Kind { rational, surd, quotient_list };

  RealSpec() = default;  // exact zero

  static RealSpec parse(const std::string& text);

  static RealSpec rational(BigInt num, BigInt den);
  static RealSpec decimal(const std::string& literal);
  static RealSpec sqrt_of(const BigInt& d);
  static RealSpec surd(BigInt p, BigInt q, BigInt d, BigInt r);
  static RealSpec quotients(BigInt a0, std::vector<BigInt> terms);

  Kind kind() const { return kind_; }
  bool is_decimal_literal() const { return decimal_digits_ >= 0; }
  int decimal_digits() const { return decimal_digits_; }
  bool is_rational() const { return kind_ != Kind::surd; }

  /// Cached double approximation (within 2 ulp of the exact value).
  double approx() const { return approx_; }

  /// Exact value at the precision of Real (cpp_bin_float tiers).
  template <class Real>
  Real value() const;

  /// num/den when the value is rational (rational and quotient_list
  /// variants); nullopt for surds.
  std::optional<std::pair<BigInt, BigInt>> exact_rational() const;

  /// 1/x for x > 0, staying in the exact family.
  RealSpec reciprocal() const;
  /// x + z for rational z = zn/zd, staying in the exact family.
  RealSpec shifted_scaled(const BigInt& mul, const BigInt& add) const;  // mul*x + add

  std::string str() const;

  // surd internals, used by the periodic expansion
  const BigInt& surd_p() const { return p_; }
  const BigInt& surd_q() const { return q_; }
  const BigInt& surd_d() const { return d_; }
  const BigInt& surd_r() const { return r_; }
  const BigInt& rat_num() const { return p_; }
  const BigInt& rat_den() const { return r_; }
  const BigInt& list_a0() const { return p_; }
  const std::vector<BigInt>& list_terms() const { return terms_; }

 private:
  void finish();  // normalize, validate, fill caches

  Kind kind_ = Kind::rational;
  // rational: value = p_/r_;  surd: (p_ + q_*sqrt(d_))/r_
  BigInt p_ = 0, q_ = 0, d_ = 0, r_ = 1;
  std::vector<BigInt> terms_;
  int decimal_digits_ = -1;
  double approx_ = 0.0;
};

template <class Real>
struct ReducedScaled {
  Real frac{};            // {mult*x + shift} in [0,1)
  int parity = 1;         // +1 if floor is even
  bool exact_integer = false;
};

/// Range reduction of mult*x + shift driven by the exact representation.
/// With Real = Float50 the reduced fraction is good to ~44 digits for
/// mult up to 1e6.
template <class Real>
ReducedScaled<Real> reduce_scaled(const RealSpec& x, long long mult, const Real& shift);

/// Convenience for the signed-log sine kernel.
ReducedAngle reduce_angle(const RealSpec& x, long long mult, double shift = 0.0);

/// Distance to the nearest integer, <y>.
double dist_to_integer(double y);
double dist_to_integer(const RealSpec& x, long long mult = 1);

// --- template definitions -------------------------------------------------

template <class Real>
Real RealSpec::value() const {
  switch (kind_) {
    case Kind::rational:
      return Real(p_) / Real(r_);
    case Kind::surd: {
      using std::sqrt;
      return (Real(p_) + Real(q_) * sqrt(Real(d_))) / Real(r_);
    }
    case Kind::quotient_list: {
      auto pq = exact_rational();
      return Real(pq->first) / Real(pq->second);
    }
  }
  raise(errc::internal, "unreachable RealSpec kind");
}

template <class Real>
ReducedScaled<Real> reduce_scaled(const RealSpec& x, long long mult, const Real& shift) {
  ReducedScaled<Real> out;
  Real frac0;
  int parity0 = 1;
  bool integer_part_exact = false;
  if (auto pq = x.exact_rational()) {
    // exact remainder first, so mult as large as the bit budget allows
    BigInt num = pq->first * mult;
    BigInt den = pq->second;
    BigInt quot, rem;
    boost::multiprecision::divide_qr(num, den, quot, rem);
    if (rem < 0) {
      rem += den;
      quot -= 1;
    }
    frac0 = Real(rem) / Real(den);
    parity0 = (quot % 2 == 0) ? 1 : -1;
    integer_part_exact = (rem == 0);
  } else {
    Real y = Real(mult) * x.value<Real>();
    detail::split_unit(y, frac0, parity0);
    integer_part_exact = false;  // surd multiples are never integers
  }
  if (shift == Real(0)) {
    out.frac = frac0;
    out.parity = parity0;
    out.exact_integer = integer_part_exact;
    return out;
  }
  Real y = frac0 + shift;
  int parity1 = 1;
  detail::split_unit(y, out.frac, parity1);
  out.parity = parity0 * parity1;
  using std::floor;
  out.exact_integer = integer_part_exact && shift == floor(shift) && out.frac == Real(0);
  return out;
}

}  // namespace stablesup
