#pragma once

#include <cstddef>
#include <vector>

#include "stablesup/precision.hpp"
#include "stablesup/real_spec.hpp"

namespace stablesup {

/// Simple continued fraction [a0; a1, a2, ...] of a RealSpec, together
/// with how the expansion ended.
///
///   complete   the finite expansion reproduces the value exactly
///   exhausted  no further terms are derivable from the input
///              (complete implies exhausted; a decimal literal whose
///              resolution ran out is exhausted but not complete)
struct ContinuedFraction {
  BigInt a0;
  std::vector<BigInt> terms;  // a1, a2, ...; all >= 1
  bool exhausted = false;
  bool complete = false;

  /// Number of partial quotients including a0.
  size_t size() const { return terms.size() + 1; }
  const BigInt& quotient(size_t k) const { return k == 0 ? a0 : terms[k - 1]; }
};

struct Convergent {
  int n = 0;
  BigInt p, q;  // p_n / q_n in lowest terms
};

/// Expand x to at most max_terms partial quotients (including a0).
///
/// Rationals use the Euclidean algorithm.  Decimal literals with f
/// fractional digits additionally stop before the first convergent with
/// q_n^2 > 10^f: beyond that point the expansion would reflect the
/// truncation of the literal, not the intended number.  Surds use the
/// exact periodic algorithm and never exhaust.  Quotient lists are
/// returned as given.
ContinuedFraction cf_expand(const RealSpec& x, size_t max_terms);

/// Convergents p_k/q_k for k = 0..n via the standard recurrence
/// (seeds p_{-1}=1, p_{-2}=0, q_{-1}=0, q_{-2}=1).  Raises
/// errc::depth_exceeded if the expansion has fewer than n+1 quotients.
std::vector<Convergent> convergents(const ContinuedFraction& cf, size_t n);

struct ApproxErrorBounds {
  Float100 lower;   // 1 / (q_n (q_n + q_{n+1}))
  Float100 upper;   // 1 / (q_n q_{n+1})
  Float100 actual;  // |x - p_n/q_n|
};

/// The two-sided convergent error bounds at index n, with the actual
/// error evaluated at 100-digit precision.  Requires the expansion to
/// reach index n+1.
ApproxErrorBounds approx_error_bounds(const RealSpec& x, const ContinuedFraction& cf, size_t n);

/// Same, expanding x internally to n+2 quotients.
ApproxErrorBounds approx_error_bounds(const RealSpec& x, size_t n);

/// ln of a big integer as a double (exact for small values, msb-based
/// for huge ones).
double big_log(const BigInt& v);

}  // namespace stablesup
