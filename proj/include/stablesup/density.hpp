#pragma once

#include "stablesup/stable_params.hpp"

namespace stablesup {

/// Which series representation to evaluate.  `automatic` picks the cheap
/// truncated expansion when its error floor already meets the tolerance
/// and falls back to the full summation otherwise; results always report
/// the mode that actually produced them.
enum class EvalMode { automatic, convergent, asymptotic };

enum class SeriesStatus {
  converged,         // est_error <= requested relative tolerance
  not_converged,     // shell decay did not set in before the cap T_max
  asymptotic_floor,  // truncated expansion; est_error is its floor
};

const char* eval_mode_name(EvalMode m);
const char* series_status_name(SeriesStatus s);

/// Outcome of a series evaluation: the value plus an honest account of
/// how it was obtained and how far it can be trusted.  est_error is
/// relative to |value|.  For status not_converged the value is the
/// diagnostic partial sum, not a usable density.
struct SeriesResult {
  double value = 0.0;
  EvalMode mode = EvalMode::convergent;
  double T_used = 0.0;     // largest shell bound m + alpha*n included
  long terms_used = 0;     // number of (m, n) terms accumulated
  double est_error = 0.0;  // relative error estimate
  SeriesStatus status = SeriesStatus::converged;
  double peak_log10_term = 0.0;  // log10 of the largest |term| encountered
};

/// Shell cap of the full double-series summation.
inline constexpr double kShellCap = 400.0;

/// Density p(x) of the supremum of the process over [0, 1].
///
/// The convergent representation sums the double series shell-by-shell
/// (shells m + alpha*n in (T, T+1]) until two consecutive shells fall
/// below eps_rel times the partial sum; a cancellation diagnostic
/// escalates the working precision when huge terms cancel.  The
/// asymptotic representation truncates optimally (before the smallest
/// shell) and reports that shell as the error floor.  Requires x > 0 and
/// eps_rel in [1e-14, 1e-2]; convergent mode additionally requires alpha
/// not witnessed as super-exponentially approximable.
SeriesResult density(const StableParams& params, double x, double eps_rel = 1e-10,
                     EvalMode mode = EvalMode::automatic);

/// P(S_1 <= x) by term-wise integration of the same series, with an
/// automatic switch to 1 - tail when the truncated tail expansion is
/// already accurate enough.  Value clamped to [0, 1].
SeriesResult cdf(const StableParams& params, double x, double eps_rel = 1e-10);

/// P(S_1 > x), the complement leg of the cdf; exposed separately so mass
/// accounting can combine both legs at one split point.
SeriesResult upper_tail(const StableParams& params, double x, double eps_rel = 1e-10);

/// cdf(x0) + upper_tail(x0) at an automatically chosen split point x0:
/// the total integral of the density as reconstructed term-wise.  The
/// split is picked so both legs meet roughly eps_rel / 200 each.
SeriesResult total_mass(const StableParams& params, double eps_rel = 1e-8);

/// Inverse cdf: bisection bracket plus a Newton polish, accepting when
/// |cdf(result) - u| <= eps.  Requires u in (1e-8, 1 - 1e-8).
double quantile(const StableParams& params, double u, double eps = 1e-10);

/// Density of the supremum over [0, t] instead of [0, 1]:
/// t^{-1/alpha} p(t^{-1/alpha} x), by self-similarity of the process.
SeriesResult rescaled_density(const StableParams& params, double t, double x,
                              double eps_rel = 1e-10,
                              EvalMode mode = EvalMode::automatic);

namespace detail {

/// Evaluation core shared with the transform oracle, which may raise the
/// shell cap beyond kShellCap in regions the capped summation cannot
/// reach.  `damped` divides each term by its integrated exponent
/// (term-wise antiderivative); convergent/asymptotic selection and all
/// reporting behave exactly as in the public entry points.
SeriesResult density_capped(const StableParams& params, double x, double eps_rel,
                            EvalMode mode, double t_cap);

}  // namespace detail

}  // namespace stablesup
