#pragma once

#include <vector>

#include "stablesup/continued_fraction.hpp"
#include "stablesup/real_spec.hpp"

namespace stablesup {

/// A certificate that x admits super-exponential rational approximation:
/// the partial quotient following index n satisfies a_{n+1} >= 2^{q_n}.
/// Only indices with q_n >= 5 count, to exclude the trivial hits every
/// number has at tiny denominators.
struct LWitness {
  int n = 0;
  BigInt q_n;
  BigInt a_next;
  double implied_b = 0.0;  // a_{n+1}^(1/q_n), the witnessed base (>= 2)
};

/// ln<q_n x> / q_n at convergent denominators; tends to 0 exactly when x
/// avoids both the rationals and the super-exponentially approximable set.
struct ProfilePoint {
  int n = 0;
  BigInt q;
  double value = 0.0;
};

enum class LVerdict {
  in_l_witnessed,    // at least one witness found (decidable, positive)
  rational,          // expansion terminated exactly
  not_in_l_to_depth  // no witness up to the examined depth (one-sided)
};

struct LClassification {
  LVerdict verdict = LVerdict::not_in_l_to_depth;
  size_t depth_examined = 0;  // highest index n scanned for a witness
  std::vector<LWitness> witnesses;
  std::vector<ProfilePoint> profile;
};

/// Scan the expansion of x up to partial quotient a_depth for
/// super-exponential approximation witnesses.  A witness anywhere makes
/// the verdict in_l_witnessed even for inputs given as finite quotient
/// lists; an exactly terminating expansion without witnesses is
/// rational; otherwise not_in_l_to_depth.
LClassification classify_L(const RealSpec& x, size_t depth);

/// Exact ln<q_n x> evaluated from big-integer arithmetic (valid for
/// denominators far beyond floating-point range).
double log_dist_at_convergent(const RealSpec& x, const Convergent& cn);

/// Exact ln<mult * x>: distance of mult*x to the nearest integer, in
/// logs, robust when the distance underflows double (near-exceptional
/// x).  -inf when mult*x is exactly integral.
double log_dist_to_integer(const RealSpec& x, const BigInt& mult);

/// Append `stages` partial quotients a_{next} = 2^{q_cur} to the given
/// quotient-list prefix, producing a member of the super-exponentially
/// approximable set with witnessed base 2 at every appended stage.
/// Raises errc::resource_limit once q_cur exceeds max_q_value (the
/// appended term needs q_cur bits of storage).
RealSpec construct_L_member(const RealSpec& prefix, int stages,
                            const BigInt& max_q_value = BigInt(1000000));

/// Same construction on a bare expansion (must be finite/complete).
ContinuedFraction construct_L_member(const ContinuedFraction& prefix, int stages,
                                     const BigInt& max_q_value = BigInt(1000000));

}  // namespace stablesup
