#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "stablesup/signed_log.hpp"
#include "stablesup/stable_params.hpp"

namespace stablesup {

/// Configuration of the Monte Carlo supremum experiment.  `paths` random
/// walks of `steps` increments each approximate the continuous-time
/// supremum from below; the empirical CDF is tabulated on `grid`.
struct McConfig {
  long paths = 1000;
  long steps = 100;
  std::uint64_t seed = 1;
  std::vector<double> grid;
};

/// Empirical CDF of the discretized supremum on a fixed grid, with
/// the binomial standard error of each entry.
struct McCdfTable {
  std::vector<double> x;
  std::vector<double> f_emp;
  std::vector<double> std_error;
};

/// Skewness parameter of the standard (beta) parametrization implied by
/// the positivity parameter rho.  For admissible parameters |beta| <= 1;
/// a bridge value outside [-1, 1] raises errc::validation.
double rho_to_beta(const StableParams& params);

/// Simulates `paths` stable random walks (exact one-dimensional stable
/// increments, scaled by steps^{-1/alpha}) and tabulates the empirical
/// CDF of the running maximum (including the starting point 0) on
/// cfg.grid.  The discretized maximum is stochastically dominated by the
/// continuous supremum, so the empirical CDF sits above the true one up
/// to sampling noise.  Fully deterministic for a fixed seed: path k draws
/// from its own generator seeded by a hash of (seed, k), so results do
/// not depend on scheduling or path order.  Requires paths >= 1000,
/// steps >= 100, and a nonempty positive grid.
McCdfTable mc_supremum_cdf(const StableParams& params, const McConfig& cfg);

/// One evaluation of the Mellin transform M(s) = E[S^{s-1}].
struct MellinPoint {
  std::complex<double> s;
  std::complex<double> value;
  double est_error = 0.0;  // absolute, all three legs combined
};

/// Numeric Mellin transform through a three-leg hybrid: term-wise
/// integration of the small-x series on (0, x_lo], Gauss-Kronrod
/// quadrature of x^{s-1} p(x) on [x_lo, 10], and term-wise integration
/// of the large-x series on [10, inf).  Within the strip
/// Re(s) in (1 - alpha rho, 1 + alpha) the integral converges classically;
/// outside it the term-wise closed forms continue M meromorphically, which
/// is permitted only with allow_continuation (otherwise
/// errc::strip_violation).
MellinPoint mellin_numeric(const StableParams& params, std::complex<double> s,
                           bool allow_continuation = false);

/// Relative defect |LHS - RHS| / (|LHS| + |RHS|) of the functional
/// equation relating M(s) and M(s+1) through four gamma factors and a
/// sine ratio.  Both transforms are taken with analytic continuation, so
/// s may sit anywhere at distance >= 1e-3 from every pole of the
/// transform, pole of the gamma factors, and zero of the sine
/// denominator; closer arguments raise errc::singular_argument.
double functional_eq_residual(const StableParams& params, std::complex<double> s);

/// One pole of the meromorphic continuation of M.  The minus family
/// sits at 1 - alpha rho - m - alpha n with residue a_{m,n}; the plus
/// family at m + alpha n (m, n >= 1) with residue -b_{m-1,n}.
struct PoleSpec {
  enum class Family { plus, minus };
  Family family = Family::minus;
  int m = 0;
  int n = 0;
  double location = 0.0;
  SignedLogValue residue_ref;
};

/// Fills location and reference residue from the coefficient formulas.
PoleSpec make_pole(const StableParams& params, PoleSpec::Family family, int m,
                   int n);

/// Residue of M at the given pole, estimated numerically as the limit of
/// (s - s0) M(s) along s = s0 + delta for delta in {0.1, 0.05, 0.025}
/// with two-stage Richardson extrapolation.  Uses pole.location as s0
/// verbatim, so a deliberately mis-set location yields a value far from
/// the reference residue.
double residue_estimate(const StableParams& params, const PoleSpec& pole);

}  // namespace stablesup
