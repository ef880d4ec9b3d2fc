#include "stablesup/oracle.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "stablesup/coefficients.hpp"
#include "stablesup/density.hpp"
#include "stablesup/detail/coeff_kernel.hpp"
#include "stablesup/errors.hpp"

namespace stablesup {
namespace {

using cplx = std::complex<double>;

constexpr double kPi = boost::math::constants::pi<double>();

// ---------------------------------------------------------------------------
// complex log-gamma (Lanczos, g = 7, 9 terms), with reflection for
// Re(z) < 0.5.  Good to ~1e-13 relative away from the poles, which is
// plenty for a defect measured against a 1e-5 bound.  The density and
// coefficient paths never need complex gamma; only this oracle does.

cplx clgamma(cplx z) {
  static const double lanczos[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi / std::sin(kPi * z)) - clgamma(1.0 - z);
  }
  z -= 1.0;
  cplx acc = lanczos[0];
  for (int i = 1; i < 9; ++i) acc += lanczos[i] / (z + double(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

// ---------------------------------------------------------------------------
// term-wise integration legs

struct LegSum {
  cplx value{0.0, 0.0};
  double est = 0.0;  // absolute error estimate
};

// Shell cap of the oracle legs.  Kept low enough that every gamma factor
// of the double-precision coefficient recurrences stays inside double
// range for alpha in the admissible set; the optimal-truncation minima
// at the split points used here sit far below this cap.
constexpr double kLegCap = 100.0;

/// Integral of x^{s-1} against one series representation over its own
/// end of the axis, term by term:
///   kind a over (0, L]:  sum a_{m,n} L^{s-1+ar+e} / (s-1+ar+e),  e = m+an,
///   kind b over [L,inf): sum b_{m,n} L^{s-1-a-e} / (1+a+e-s),    e = m+a(n-1),
/// with ar = alpha rho.  On the side where the series converges the sum
/// runs until two consecutive shells drop below eps_leg relative to the
/// partial sum; on the divergent side it truncates at the smallest shell
/// and reports that shell as the error floor.  Denominators that vanish
/// are genuine poles of the continued transform; callers keep away from
/// them.
LegSum termwise_leg(const StableParams& P, CoeffKind kind, double L, cplx s,
                    double eps_leg) {
  const double alpha = P.alpha_d();
  const double arho = alpha * P.rho();
  const bool convergent_side = (kind == CoeffKind::a) != P.alpha_below_one();
  const double logL = std::log(L);

  const int nshell = static_cast<int>(kLegCap) + 2;
  std::vector<cplx> shell(static_cast<size_t>(nshell), cplx(0.0, 0.0));

  detail::CoeffKernel<double> kern(P, kind);
  kern.run(kLegCap, [&](int m, int n, double c) {
    if (c == 0.0) return;
    const double e = (kind == CoeffKind::a) ? m + alpha * n : m + alpha * (n - 1);
    const int k = static_cast<int>(std::ceil(e - 1e-12));
    if (k >= nshell) return;
    cplx expo, den;
    if (kind == CoeffKind::a) {
      expo = (s - 1.0 + arho + e) * logL;
      den = s - 1.0 + arho + e;
    } else {
      expo = (s - 1.0 - alpha - e) * logL;
      den = 1.0 + alpha + e - s;
    }
    shell[static_cast<size_t>(k)] += c * std::exp(expo) / den;
  });

  LegSum out;
  if (convergent_side) {
    double last = 0.0, prev = 0.0;
    int used = -1;
    for (int k = 0; k < nshell; ++k) {
      out.value += shell[static_cast<size_t>(k)];
      prev = last;
      last = std::abs(shell[static_cast<size_t>(k)]);
      used = k;
      const double tol = eps_leg * (std::abs(out.value) + 1e-300);
      if (k >= 1 && last < tol && prev < tol) break;
    }
    // geometric tail bound from the last two shells
    double r = (prev > 0.0 && last > 0.0) ? last / prev : 0.9;
    r = std::min(r, 0.9);
    out.est = last * (1.0 + r / (1.0 - r));
    (void)used;
  } else {
    // optimal truncation: stop in front of the smallest shell
    int kmin = -1;
    double vmin = 0.0;
    for (int k = 0; k < nshell; ++k) {
      const double a = std::abs(shell[static_cast<size_t>(k)]);
      if (a == 0.0 || !std::isfinite(a)) continue;
      if (kmin < 0 || a < vmin) {
        kmin = k;
        vmin = a;
      }
    }
    if (kmin < 0) return out;  // identically zero leg
    for (int k = 0; k < kmin; ++k) out.value += shell[static_cast<size_t>(k)];
    out.est = vmin;
  }
  return out;
}

// ---------------------------------------------------------------------------
// quadrature leg on [x_lo, 10]: fixed composite Gauss-Kronrod 15 panels.
// The density values at the nodes do not depend on s, so they are
// computed once per parameter pair and reused by every transform
// evaluation; only the cheap x^{s-1} weighting is per-call.

constexpr double kQuadHi = 10.0;

struct QuadCache {
  std::vector<double> center, half;  // one entry per panel
  std::vector<double> xs, px, perr;  // 15 entries per panel
};

struct Gk15 {
  double t[15];   // abscissae on [-1, 1], ascending
  double wk[15];  // Kronrod weights
  double wg[15];  // embedded Gauss weights (zero on Kronrod-only nodes)
};

const Gk15& gk15() {
  static const Gk15 rule = [] {
    Gk15 r{};
    const auto& xk = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
    const auto& wk = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
    for (int i = 0; i < 15; ++i) {
      const int j = std::abs(i - 7);  // distance from the center node
      r.t[i] = (i < 7 ? -1.0 : 1.0) * xk[static_cast<size_t>(j)];
      r.wk[i] = wk[static_cast<size_t>(j)];
      // Gauss-7 nodes are the even-indexed Kronrod abscissae
      r.wg[i] = (j % 2 == 0) ? wg[static_cast<size_t>(j / 2)] : 0.0;
    }
    return r;
  }();
  return rule;
}

const QuadCache& quad_cache(const StableParams& P) {
  static std::map<std::pair<double, double>, QuadCache> cache;
  const auto key = std::make_pair(P.alpha_d(), P.rho());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const double lo = P.alpha_below_one() ? 0.1 : 1.0;
  const int panels = P.alpha_below_one() ? 12 : 10;
  const double ratio = std::pow(kQuadHi / lo, 1.0 / panels);
  const Gk15& rule = gk15();

  QuadCache qc;
  double a = lo;
  for (int p = 0; p < panels; ++p) {
    const double b = (p + 1 == panels) ? kQuadHi : a * ratio;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    qc.center.push_back(c);
    qc.half.push_back(h);
    for (int i = 0; i < 15; ++i) {
      const double x = c + h * rule.t[i];
      SeriesResult r = density(P, x, 1e-10);
      if (r.status == SeriesStatus::not_converged)
        raise(errc::internal, "density did not converge at a quadrature node");
      qc.xs.push_back(x);
      qc.px.push_back(r.value);
      qc.perr.push_back(r.est_error * std::abs(r.value));
    }
    a = b;
  }
  return cache.emplace(key, std::move(qc)).first->second;
}

LegSum quad_leg(const StableParams& P, cplx s) {
  const QuadCache& qc = quad_cache(P);
  const Gk15& rule = gk15();
  LegSum out;
  size_t node = 0;
  for (size_t p = 0; p < qc.center.size(); ++p) {
    cplx k_sum(0.0, 0.0), g_sum(0.0, 0.0);
    double node_err = 0.0;
    for (int i = 0; i < 15; ++i, ++node) {
      const cplx f = std::exp((s - 1.0) * std::log(qc.xs[node])) * qc.px[node];
      k_sum += rule.wk[i] * f;
      g_sum += rule.wg[i] * f;
      node_err += rule.wk[i] * std::abs(f) / std::max(qc.px[node], 1e-300) *
                  qc.perr[node];
    }
    out.value += qc.half[p] * k_sum;
    out.est += qc.half[p] * (std::abs(k_sum - g_sum) + node_err);
  }
  return out;
}

// ---------------------------------------------------------------------------
// singularity bookkeeping for the functional equation

void push_arith(std::vector<double>* sing, double start, double step, double lo,
                double hi) {
  // start + k*step for integer k, clipped to [lo, hi]
  if (step <= 0) return;
  double k0 = std::floor((lo - start) / step);
  for (double k = k0 - 1; start + k * step <= hi + 1; k += 1)
    if (start + k * step >= lo - 1) sing->push_back(start + k * step);
}

/// Distance from z to the nearest pole of M, pole of the gamma factors,
/// or zero of the sine denominator of the functional equation; arguments
/// closer than 1e-3 raise errc::singular_argument.
void guard_proximity(const StableParams& P, cplx z) {
  const double alpha = P.alpha_d();
  const double arho = alpha * P.rho();
  const double lo = z.real() - 2.0, hi = z.real() + 2.0;

  std::vector<double> sing;
  // poles of M: minus family 1 - ar - (m + an), plus family m + an
  // (m, n >= 1); both checked at z and z + 1 since the equation uses
  // M(s) and M(s+1).
  const int mm = 14;
  for (int m = 0; m <= mm; ++m)
    for (int n = 0; m + alpha * n <= mm + 1; ++n) {
      sing.push_back(1.0 - arho - (m + alpha * n));
      if (m >= 1 && n >= 1) sing.push_back(m + alpha * n);
    }
  // gamma poles: s in -N (Gamma(s), Gamma(s+1)), s = 1 + alpha k
  // (Gamma((1-s)/alpha)), s = alpha k (Gamma(-s/alpha)), k >= 0
  for (int k = 0; k <= mm; ++k) {
    sing.push_back(-double(k));
    sing.push_back(-double(k) - 1.0);
    sing.push_back(1.0 + alpha * k);
    sing.push_back(alpha * k);
  }
  // sine zeros: s = 1 - alpha k and s = 1 - ar + alpha k, all integer k
  push_arith(&sing, 1.0, alpha, lo, hi);
  push_arith(&sing, 1.0 - arho, alpha, lo, hi);

  double dmin = 1e300;
  for (double p : sing) {
    dmin = std::min(dmin, std::abs(z - cplx(p, 0.0)));
    dmin = std::min(dmin, std::abs(z + 1.0 - cplx(p, 0.0)));
  }
  if (dmin < 1e-3)
    raise(errc::singular_argument,
          "functional equation argument within 1e-3 of a pole or sine zero");
}

// ---------------------------------------------------------------------------
// Monte Carlo

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double rho_to_beta(const StableParams& params) {
  const double alpha = params.alpha_d();
  const double beta =
      std::tan(kPi * alpha * (params.rho() - 0.5)) / std::tan(kPi * alpha / 2.0);
  if (!std::isfinite(beta) || std::abs(beta) > 1.0 + 1e-12)
    raise(errc::validation, "skewness bridge gives |beta| > 1");
  return std::clamp(beta, -1.0, 1.0);
}

McCdfTable mc_supremum_cdf(const StableParams& params, const McConfig& cfg) {
  if (cfg.paths < 1000) raise(errc::validation, "mc paths must be >= 1000");
  if (cfg.steps < 100) raise(errc::validation, "mc steps must be >= 100");
  if (cfg.grid.empty()) raise(errc::validation, "mc grid must be nonempty");
  for (double g : cfg.grid)
    if (!(g > 0.0) || !std::isfinite(g))
      raise(errc::validation, "mc grid values must be positive finite");
  (void)rho_to_beta(params);  // admissibility of the implied skewness

  std::vector<double> xs = cfg.grid;
  std::sort(xs.begin(), xs.end());

  const double alpha = params.alpha_d();
  const double inva = 1.0 / alpha;
  const double q = (1.0 - alpha) * inva;
  const double B = kPi * (params.rho() - 0.5);
  const double scale = std::pow(double(cfg.steps), -inva);

  std::vector<long> hist(xs.size() + 1, 0);
  for (long path = 0; path < cfg.paths; ++path) {
    std::mt19937_64 eng(splitmix64(
        cfg.seed + static_cast<std::uint64_t>(path) * 0x9E3779B97F4A7C15ULL));
    double sum = 0.0, mx = 0.0;
    for (long k = 0; k < cfg.steps; ++k) {
      const double u = double(eng() >> 11) * 0x1p-53;  // [0, 1)
      const double w = double(eng() >> 11) * 0x1p-53;
      const double U = (u - 0.5) * kPi;
      double W = -std::log(1.0 - w);
      if (W < 1e-300) W = 1e-300;
      const double aUB = alpha * (U + B);
      double c2 = std::cos(U - aUB);
      if (c2 < 1e-15) c2 = 1e-15;
      const double x = std::sin(aUB) *
                       std::exp(q * (std::log(c2) - std::log(W)) -
                                inva * std::log(std::cos(U)));
      sum += scale * x;
      if (sum > mx) mx = sum;
    }
    const size_t idx = static_cast<size_t>(
        std::lower_bound(xs.begin(), xs.end(), mx) - xs.begin());
    ++hist[idx];
  }

  McCdfTable out;
  out.x = xs;
  long cum = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    cum += hist[i];
    const double f = double(cum) / double(cfg.paths);
    out.f_emp.push_back(f);
    out.std_error.push_back(std::sqrt(f * (1.0 - f) / double(cfg.paths)));
  }
  return out;
}

MellinPoint mellin_numeric(const StableParams& params, cplx s,
                           bool allow_continuation) {
  const double arho = params.alpha_d() * params.rho();
  if (!allow_continuation &&
      (s.real() <= 1.0 - arho || s.real() >= 1.0 + params.alpha_d()))
    raise(errc::strip_violation,
          "Re(s) outside the strip (1 - alpha rho, 1 + alpha)");

  const double lo = params.alpha_below_one() ? 0.1 : 1.0;
  const LegSum a = termwise_leg(params, CoeffKind::a, lo, s, 1e-12);
  const LegSum q = quad_leg(params, s);
  const LegSum b = termwise_leg(params, CoeffKind::b, kQuadHi, s, 1e-12);

  MellinPoint out;
  out.s = s;
  out.value = a.value + q.value + b.value;
  out.est_error = a.est + q.est + b.est;
  return out;
}

double functional_eq_residual(const StableParams& params, cplx s) {
  guard_proximity(params, s);
  const double alpha = params.alpha_d();
  const double arho = alpha * params.rho();

  const MellinPoint m1 = mellin_numeric(params, s, true);
  const MellinPoint m2 = mellin_numeric(params, s + 1.0, true);

  const cplx lhs =
      m1.value * std::exp(-clgamma(s) - clgamma((1.0 - s) / alpha));
  const cplx rhs = -m2.value *
                   std::exp(-clgamma(s + 1.0) - clgamma(-s / alpha)) *
                   std::sin(kPi * (1.0 - s) / alpha) /
                   std::sin(kPi * (arho - 1.0 + s) / alpha);
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
}

PoleSpec make_pole(const StableParams& params, PoleSpec::Family family, int m,
                   int n) {
  PoleSpec p;
  p.family = family;
  p.m = m;
  p.n = n;
  const double alpha = params.alpha_d();
  if (family == PoleSpec::Family::minus) {
    if (m < 0 || n < 0) raise(errc::validation, "minus-family pole needs m, n >= 0");
    p.location = 1.0 - alpha * params.rho() - (m + alpha * n);
    p.residue_ref = coeff_a(params, m, n);
  } else {
    if (m < 1 || n < 1) raise(errc::validation, "plus-family pole needs m, n >= 1");
    p.location = m + alpha * n;
    p.residue_ref = coeff_b(params, m - 1, n).negate();
  }
  return p;
}

double residue_estimate(const StableParams& params, const PoleSpec& pole) {
  if (pole.family == PoleSpec::Family::minus) {
    if (pole.m < 0 || pole.n < 0)
      raise(errc::validation, "minus-family pole needs m, n >= 0");
  } else if (pole.m < 1 || pole.n < 1) {
    raise(errc::validation, "plus-family pole needs m, n >= 1");
  }
  auto g = [&](double d) {
    return d * mellin_numeric(params, cplx(pole.location + d, 0.0), true)
                   .value.real();
  };
  const double g1 = g(0.1), g2 = g(0.05), g3 = g(0.025);
  const double r1 = 2.0 * g2 - g1, r2 = 2.0 * g3 - g2;
  return (4.0 * r2 - r1) / 3.0;
}

}  // namespace stablesup
