#include "stablesup/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stablesup {

namespace {

// a >= 2^e, exactly:  msb(a) = floor(log2 a) >= e
bool ge_pow2(const BigInt& a, const BigInt& e) {
  if (a <= 0) return false;
  if (e <= 0) return true;
  return BigInt(boost::multiprecision::msb(a)) >= e;
}

double to_double_sat(const BigInt& v) {
  if (boost::multiprecision::msb(v) > 1000) return std::numeric_limits<double>::infinity();
  return static_cast<double>(v);
}

}  // namespace

double log_dist_at_convergent(const RealSpec& x, const Convergent& cn) {
  if (auto pq = x.exact_rational()) {
    // <q_n * p/q> = min(r, q - r)/q with r = q_n p mod q
    BigInt r = (cn.q * pq->first) % pq->second;
    if (r < 0) r += pq->second;
    if (r == 0) return -std::numeric_limits<double>::infinity();
    BigInt other = pq->second - r;
    BigInt m = std::min(r, other);
    return big_log(m) - big_log(pq->second);
  }
  // surd (p + q sqrt d)/r: q_n x - p_n = (A + B sqrt d)/r with
  // A = q_n p - p_n r, B = q_n q.  The small combination A + B sqrt d is
  // recovered as (A^2 - B^2 d) / (A - B sqrt d), whose factors are large
  // and evaluate stably in logs.
  BigInt A = cn.q * x.surd_p() - cn.p * x.surd_r();
  BigInt B = cn.q * x.surd_q();
  BigInt N = A * A - B * B * x.surd_d();
  if (N < 0) N = -N;
  // |A - B sqrt d| with A ~ -B sqrt d (opposite sign of the tiny sum)
  Float100 conj = Float100(A) - Float100(B) * sqrt(Float100(x.surd_d()));
  if (conj < 0) conj = -conj;
  double log_conj = static_cast<double>(log(conj));
  return big_log(N) - log_conj - big_log(x.surd_r() < 0 ? -x.surd_r() : x.surd_r());
}

double log_dist_to_integer(const RealSpec& x, const BigInt& mult) {
  // The nearest integer needs only a handful of leading digits, so a
  // 100-digit value pins it; the distance itself is then recovered by
  // the same exact machinery as at a convergent, with the synthetic
  // "convergent" nearest/mult.
  Float100 y = Float100(mult) * x.value<Float100>();
  BigInt nearest = boost::multiprecision::round(y).convert_to<BigInt>();
  Convergent c;
  c.n = 0;
  c.p = nearest;
  c.q = mult;
  return log_dist_at_convergent(x, c);
}

LClassification classify_L(const RealSpec& x, size_t depth) {
  if (depth < 2) raise(errc::validation, "classification depth must be >= 2");
  ContinuedFraction cf = cf_expand(x, depth + 1);
  size_t last = cf.size() - 1;  // highest available quotient index
  auto cs = convergents(cf, last);

  LClassification out;
  out.depth_examined = last >= 1 ? last - 1 : 0;
  for (size_t n = 1; n + 1 <= last; ++n) {
    const BigInt& qn = cs[n].q;
    const BigInt& anext = cf.quotient(n + 1);
    if (qn >= 5 && ge_pow2(anext, qn)) {
      double b = std::exp(big_log(anext) / to_double_sat(qn));
      out.witnesses.push_back({static_cast<int>(n), qn, anext, b});
    }
  }
  for (size_t n = 1; n + 1 <= last; ++n) {
    double ld = log_dist_at_convergent(x, cs[n]);
    double qd = to_double_sat(cs[n].q);
    double v;
    if (std::isinf(qd)) {
      // -exp(ln|ld| - ln q_n), keeping the ratio finite for huge q_n
      v = (ld < 0) ? -std::exp(std::log(-ld) - big_log(cs[n].q)) : 0.0;
    } else {
      v = ld / qd;
    }
    out.profile.push_back({static_cast<int>(n), cs[n].q, v});
  }

  if (!out.witnesses.empty())
    out.verdict = LVerdict::in_l_witnessed;
  else if (cf.complete)
    out.verdict = LVerdict::rational;
  else
    out.verdict = LVerdict::not_in_l_to_depth;
  return out;
}

RealSpec construct_L_member(const RealSpec& prefix, int stages, const BigInt& max_q_value) {
  if (prefix.kind() != RealSpec::Kind::quotient_list)
    raise(errc::validation, "construction prefix must be a quotient list");
  if (stages < 1) raise(errc::validation, "need at least one construction stage");

  BigInt a0 = prefix.list_a0();
  std::vector<BigInt> terms = prefix.list_terms();

  // running convergent denominator over the full term list
  BigInt q2 = 1, q1 = 0, q = 0;
  auto push_q = [&](const BigInt& a) {
    q = a * q1 + q2;
    q2 = q1;
    q1 = q;
  };
  push_q(a0);
  for (const BigInt& a : terms) push_q(a);

  for (int s = 0; s < stages; ++s) {
    if (q > max_q_value)
      raise(errc::resource_limit,
            "next stage needs a 2^q term with q > " + max_q_value.str() + " bits",
            static_cast<long long>(s));
    BigInt a = BigInt(1) << static_cast<unsigned>(q);
    terms.push_back(a);
    push_q(a);
  }
  return RealSpec::quotients(std::move(a0), std::move(terms));
}

ContinuedFraction construct_L_member(const ContinuedFraction& prefix, int stages,
                                     const BigInt& max_q_value) {
  RealSpec in = RealSpec::quotients(prefix.a0, prefix.terms);
  RealSpec out = construct_L_member(in, stages, max_q_value);
  ContinuedFraction cf;
  cf.a0 = out.list_a0();
  cf.terms = out.list_terms();
  cf.exhausted = true;
  cf.complete = true;
  return cf;
}

}  // namespace stablesup
