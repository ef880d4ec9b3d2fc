#pragma once

#include <iosfwd>
#include <vector>

#include "stablesup/real_spec.hpp"

namespace stablesup {

enum class TrigKind { sec, csc, csc_shifted };

/// Reduced trig arguments within this distance of a pole of sec/csc
/// abort the product.
inline constexpr double kSingularTol = 1e-14;

/// Running normalized log-products (1/k) sum_{l<=k} ln|f(pi l x + pi y)|
/// for f = sec or csc.  For x outside the rationals and the
/// super-exponentially approximable set the value converges to ln 2;
/// rational x is permitted for single evaluations but flagged, and
/// shifted csc products carry no asymptotic guarantee at all.
struct ProductTrace {
  TrigKind kind = TrigKind::sec;
  RealSpec x;
  double shift = 0.0;  // y
  long long k_max = 0;

  struct Entry {
    long long k;
    double value;  // (1/k) sum_{l<=k} ln|f|
  };
  std::vector<Entry> cumulative;  // exactly k_max entries

  bool rational_x = false;
  bool no_asymptotic_guarantee = false;
};

/// Evaluate the product trace.  Arguments l*x + y are reduced modulo 1
/// at 50-digit precision driven by the exact representation of x, so the
/// reduced fraction keeps >= 15 correct digits through l = 10^6.
/// Raises errc::singular_argument (detail = l) if a reduced argument
/// falls within kSingularTol of a pole, and errc::validation for a
/// nonzero shift with an unshifted kind.
ProductTrace trig_log_product(TrigKind kind, const RealSpec& x, double y, long long k_max);

/// Final normalized value of the unshifted product; requires
/// irrational x (the rate statement is vacuous for rationals).
double lemma1_rate(const RealSpec& x, TrigKind kind, long long k_max);

/// CSV with header "k,normalized_log_product".
void export_csv(const ProductTrace& trace, std::ostream& os);

}  // namespace stablesup
