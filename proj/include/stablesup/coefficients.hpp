#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stablesup/detail/coeff_kernel.hpp"
#include "stablesup/liouville.hpp"
#include "stablesup/signed_log.hpp"
#include "stablesup/stable_params.hpp"

namespace stablesup {

/// Memoized triangular table of the series coefficients over the index
/// set m + alpha n <= T, in signed-log form, together with the
/// incrementally built cumulative sine-ratio caches.
struct CoefficientTable {
  CoefficientTable(StableParams p, CoeffKind k, double t)
      : params(std::move(p)), kind(k), T(t) {}

  StableParams params;
  CoeffKind kind;
  double T;
  std::map<std::pair<int, int>, SignedLogValue> entries;  // key (m, n)
  std::vector<SignedLogValue> row_sin_cache;  // cumulative row ratios, index m
  std::vector<SignedLogValue> col_sin_cache;  // cumulative column ratios, index n
};

/// Coefficient of x^{m + alpha n} in the convergent series at zero,
/// evaluated freshly (no caching) through the literal product formula.
/// Exact zero whenever the reciprocal gamma factor sits on a pole.
SignedLogValue coeff_a(const StableParams& params, int m, int n);

/// Coefficient of the asymptotic series at infinity (n >= 1), through
/// the cancelled form 1/(Gamma(1+n+m/alpha) Gamma(-m-alpha n)) times the
/// sine-ratio products; stays finite on the zero rows of the a-family.
SignedLogValue coeff_b(const StableParams& params, int m, int n);

/// The b coefficient through the uncancelled gamma-ratio times coeff_a,
/// for cross-validation only.  Raises errc::gamma_pole where the ratio
/// degenerates to 0 * inf (the zero rows of the a-family).
SignedLogValue coeff_b_uncancelled(const StableParams& params, int m, int n);

/// All coefficients with m + alpha n <= T, O(1) work per entry.
CoefficientTable build_table(const StableParams& params, CoeffKind kind, double T);

/// Conditioning diagnosis of the sine-ratio denominators up to shell T:
/// how close any sin(pi j / alpha) (rows, j <= T) or sin(pi alpha j)
/// (columns, j <= T/alpha) comes to zero, and the implied worst-case
/// log-magnitude amplification of a table entry.  Quantities are held in
/// log10 so that near-exceptional alpha cannot underflow the report.
struct ConditionReport {
  double T = 0;
  double log10_min_row_sin = 0;  // log10 min |sin(pi j / alpha)|, 1 <= j <= T
  long long argmin_row_j = 0;    // 0 when the scan range is empty
  double log10_min_col_sin = 0;  // log10 min |sin(pi alpha j)|, 1 <= j <= T/alpha
  long long argmin_col_j = 0;
  double log10_amplification = 0;  // -(row min + col min) in log10
  bool severe = false;             // amplification beyond 10^8
  LVerdict alpha_verdict = LVerdict::not_in_l_to_depth;
};

ConditionReport condition_report(const StableParams& params, double T);

/// CSV dump: m,n,sign,log10_abs,value_if_representable (empty when the
/// magnitude falls outside double range).
std::string export_csv(const CoefficientTable& table);

}  // namespace stablesup
