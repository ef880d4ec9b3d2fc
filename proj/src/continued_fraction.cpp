#include "stablesup/continued_fraction.hpp"

#include <cmath>
#include <limits>

namespace stablesup {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  // b > 0 assumed
  BigInt q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r < 0) q -= 1;
  return q;
}

// Euclidean expansion of num/den (den > 0), appending at most max_terms
// quotients.  Optionally stops before a convergent whose q exceeds
// q_limit (granularity of a decimal literal); q_limit == 0 disables it.
ContinuedFraction expand_rational(BigInt num, BigInt den, size_t max_terms,
                                  const BigInt& q_limit) {
  ContinuedFraction cf;
  BigInt q_prev2 = 1, q_prev1 = 0;  // q_{-2}, q_{-1}
  bool first = true;
  while (max_terms-- > 0) {
    BigInt a = floor_div(num, den);
    BigInt q_next = a * q_prev1 + q_prev2;
    if (!first && q_limit != 0 && q_next > q_limit) {
      cf.exhausted = true;  // literal resolution ran out, value undetermined
      return cf;
    }
    if (first)
      cf.a0 = a;
    else
      cf.terms.push_back(a);
    q_prev2 = q_prev1;
    q_prev1 = q_next;
    BigInt rem = num - a * den;
    if (rem == 0) {
      cf.exhausted = true;
      cf.complete = true;
      return cf;
    }
    num = den;
    den = rem;
    first = false;
  }
  return cf;
}

// Periodic expansion of (P0 + sqrt(D)) / Q0 with Q0 | D - P0^2 after
// pre-scaling.  D is never a perfect square here, so the expansion is
// infinite and every requested term is produced.
ContinuedFraction expand_surd(const RealSpec& x, size_t max_terms) {
  // (p + q sqrt(d)) / r  ->  (P + sqrt(D)) / Q with D = q^2 d, q > 0
  BigInt p = x.surd_p(), q = x.surd_q(), d = x.surd_d(), r = x.surd_r();
  if (q < 0) {  // (p - |q| sqrt d)/r = (-p + |q| sqrt d)/(-r)
    q = -q;
    p = -p;
    r = -r;
  }
  BigInt P = p, Q = r, D = q * q * d;
  if ((D - P * P) % Q != 0) {
    BigInt absq = Q < 0 ? -Q : Q;
    P *= absq;
    D *= absq * absq;
    Q *= absq;
  }
  BigInt s = boost::multiprecision::sqrt(D);  // floor sqrt, fixed for the run

  ContinuedFraction cf;
  bool first = true;
  while (max_terms-- > 0) {
    BigInt a;
    if (Q > 0) {
      a = floor_div(P + s, Q);
    } else {
      // floor(t/Q) for Q < 0 and irrational numerator P + sqrt(D)
      a = -(floor_div(P + s, -Q) + 1);
    }
    if (first)
      cf.a0 = a;
    else
      cf.terms.push_back(a);
    first = false;
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  return cf;
}

}  // namespace

ContinuedFraction cf_expand(const RealSpec& x, size_t max_terms) {
  if (max_terms == 0) raise(errc::validation, "cf_expand needs at least one term");
  switch (x.kind()) {
    case RealSpec::Kind::rational: {
      BigInt q_limit = 0;
      if (x.is_decimal_literal()) {
        // keep convergents only while q_n^2 <= 10^digits
        BigInt gran = 1;
        for (int k = 0; k < x.decimal_digits(); ++k) gran *= 10;
        q_limit = boost::multiprecision::sqrt(gran);
        if (q_limit == 0) q_limit = 1;
      }
      return expand_rational(x.rat_num(), x.rat_den(), max_terms, q_limit);
    }
    case RealSpec::Kind::surd:
      return expand_surd(x, max_terms);
    case RealSpec::Kind::quotient_list: {
      ContinuedFraction cf;
      cf.a0 = x.list_a0();
      const auto& t = x.list_terms();
      size_t keep = std::min(t.size(), max_terms - 1);
      cf.terms.assign(t.begin(), t.begin() + keep);
      if (keep == t.size()) {
        cf.exhausted = true;
        cf.complete = true;  // the list *is* the number
      }
      return cf;
    }
  }
  raise(errc::internal, "unreachable RealSpec kind");
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, size_t n) {
  if (n + 1 > cf.size())
    raise(errc::depth_exceeded,
          "convergent index " + std::to_string(n) + " exceeds expansion of " +
              std::to_string(cf.size()) + " quotients",
          static_cast<long long>(cf.size()));
  std::vector<Convergent> out;
  out.reserve(n + 1);
  BigInt p2 = 0, p1 = 1;  // p_{-2}, p_{-1}
  BigInt q2 = 1, q1 = 0;
  for (size_t k = 0; k <= n; ++k) {
    const BigInt& a = cf.quotient(k);
    BigInt p = a * p1 + p2;
    BigInt q = a * q1 + q2;
    out.push_back({static_cast<int>(k), p, q});
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
  }
  return out;
}

ApproxErrorBounds approx_error_bounds(const RealSpec& x, const ContinuedFraction& cf, size_t n) {
  auto cs = convergents(cf, n + 1);
  const BigInt& qn = cs[n].q;
  const BigInt& qn1 = cs[n + 1].q;
  ApproxErrorBounds b;
  b.lower = Float100(1) / (Float100(qn) * Float100(qn + qn1));
  b.upper = Float100(1) / (Float100(qn) * Float100(qn1));
  Float100 xv = x.value<Float100>();
  Float100 err = xv - Float100(cs[n].p) / Float100(qn);
  b.actual = err < 0 ? Float100(-err) : err;
  return b;
}

ApproxErrorBounds approx_error_bounds(const RealSpec& x, size_t n) {
  return approx_error_bounds(x, cf_expand(x, n + 2), n);
}

double big_log(const BigInt& v) {
  if (v <= 0) raise(errc::validation, "big_log of nonpositive value");
  if (v == 1) return 0.0;
  size_t bits = boost::multiprecision::msb(v);
  if (bits <= 900) return std::log(static_cast<double>(v));
  // top 64 bits carry all double precision: v ~ top * 2^(bits-63)
  BigInt top = v >> (bits - 63);
  return std::log(static_cast<double>(top)) + std::log(2.0) * static_cast<double>(bits - 63);
}

}  // namespace stablesup
