#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <vector>

#include "stablesup/errors.hpp"
#include "stablesup/real_spec.hpp"
#include "stablesup/special.hpp"
#include "stablesup/stable_params.hpp"

namespace stablesup {

enum class CoeffKind { a, b };

namespace detail {

/// |sin| below this in a denominator means alpha is effectively rational
/// at the working scale.
inline constexpr double kSineGuard = 1e-14;

// fractional part of an arithmetic progression y_j = y_0 + j*step,
// tracked with the parity of floor(y_j) so that sin(pi y_j) keeps its
// sign; the step fraction comes from the exact reduction machinery
template <class Real>
struct FracState {
  Real frac{};
  int parity = 1;

  void add(const Real& step_frac, int step_parity) {
    frac += step_frac;
    parity *= step_parity;
    if (frac >= Real(1)) {
      frac -= Real(1);
      parity = -parity;
    }
  }
  Real dist() const { return frac <= Real(0.5) ? frac : Real(1) - frac; }
  /// signed sin(pi y) via the mirrored fraction (full accuracy near 0 and 1)
  Real sinpi() const {
    using std::sin;
    const Real t = frac <= Real(0.5) ? frac : Real(1) - frac;
    return Real(parity) * sin(boost::math::constants::pi<Real>() * t);
  }
};

/// Row-major generator of the series coefficients over the triangular
/// index set m + alpha n <= T, in raw Real arithmetic (the software
/// floating types have enormous exponent range, so gamma factors that
/// would overflow double are held directly).  Per entry the work is a
/// constant number of multiplications: the two gamma factors follow
/// integer-step recurrences along the row (argument + n) and down the
/// column (argument + m), and the sine-ratio products gain one factor
/// per new row/column.
///
/// Emission order: m ascending, n ascending within each row.
/// Kind a visits n >= 0, kind b visits n >= 1.
template <class Real>
class CoeffKernel {
 public:
  CoeffKernel(const StableParams& P, CoeffKind kind) : kind_(kind) {
    alpha_ = P.alpha().template value<Real>();
    recip_ = P.alpha_recip().template value<Real>();
    rho_ = Real(P.rho());
    pi_ = boost::math::constants::pi<Real>();

    auto rs = reduce_scaled<Real>(P.alpha_recip(), 1, Real(0));
    step_recip_ = rs.frac;
    step_recip_par_ = rs.parity;
    auto as = reduce_scaled<Real>(P.alpha(), 1, Real(0));
    step_alpha_ = as.frac;
    step_alpha_par_ = as.parity;
  }

  /// visit(m, n, value) for every index in the set; also fills the
  /// cumulative sine-ratio caches rs_cache (index m) and cs_cache
  /// (index n).
  template <class Visit>
  void run(double T, Visit&& visit) {
    if (T < 0) raise(errc::validation, "shell bound T must be >= 0");
    using std::abs;
    using boost::math::tgamma;

    const int m_max = static_cast<int>(std::floor(T + 1e-9));
    const double alpha_d = static_cast<double>(alpha_);
    auto n_hi = [&](int m) {
      return static_cast<int>(std::floor((T - m) / alpha_d + 1e-9));
    };
    const int n_lo = (kind_ == CoeffKind::a) ? 0 : 1;

    rs_cache.assign(1, Real(1));
    cs_cache.assign(1, Real(1));

    // column state, created on first visit (row 0 spans all columns)
    std::vector<Real> colgamma;  // kind a: 1/Gamma(alpha(rho+n)); kind b: Gamma(1+alpha n)
    std::vector<Real> colbase;   // kind a: alpha(rho+n); kind b: alpha n
    std::vector<Real> colsin;    // kind b only: sin(pi alpha n)

    // row-advancing fractional states
    FracState<Real> srow{rho_, 1};   // frac(rho + m/alpha)
    FracState<Real> sden;            // frac(m/alpha)
    // column-advancing states (only used while columns are first built)
    FracState<Real> cnum;            // frac(alpha rho + (n-1) alpha), seeded below
    FracState<Real> cden;            // frac(alpha n)
    {
      Real ar = alpha_ * rho_;
      int par = 1;
      detail::split_unit(ar, cnum.frac, par);
      cnum.parity = par;
    }

    Real mval = 0;           // m / alpha
    Real rs_run = 1;         // RS(m)
    Real prev_srow_sin = 0;  // sin at s-state of the previous row

    for (int m = 0; m <= m_max; ++m) {
      const int nmax = n_hi(m);
      if (nmax < n_lo) break;  // rows only shrink

      if (m > 0) {
        // advance row states; RS gains numerator s(m-1), denominator sin(pi m/alpha)
        sden.add(step_recip_, step_recip_par_);
        Real den = sden.sinpi();
        if (abs(den) < Real(kSineGuard))
          raise(errc::near_rational_alpha,
                "sin(pi j/alpha) below 1e-14 at j = " + std::to_string(m), m);
        rs_run *= prev_srow_sin / den;
        srow.add(step_recip_, step_recip_par_);
        mval += recip_;
      }
      prev_srow_sin = srow.sinpi();
      if (static_cast<int>(rs_cache.size()) == m) rs_cache.push_back(rs_run);

      // zero rows: rho + n + m/alpha within pole tolerance of an integer
      const bool row_near_integer = static_cast<double>(srow.dist()) < kPoleTol;

      // per-row gamma state along n
      Real rowgamma;
      if (kind_ == CoeffKind::a) {
        rowgamma = tgamma(rho_ + mval);          // Gamma(rho + m/alpha), n = 0
        for (int n = 1; n < n_lo; ++n) rowgamma *= (rho_ + mval + (n - 1));
      } else {
        rowgamma = Real(1) / tgamma(Real(2) + mval);  // 1/Gamma(1+n+m/alpha) at n = 1
      }

      const Real row_pref = prev_srow_sin / pi_;  // kind a prefactor
      const int sgn_m = (m % 2 == 0) ? 1 : -1;

      for (int n = n_lo; n <= nmax; ++n) {
        // first visit of column n: extend caches and column state
        while (static_cast<int>(colgamma.size()) <= n - n_lo) {
          const int nn = n_lo + static_cast<int>(colgamma.size());
          if (nn >= 1) {
            // advance the column sine states to index nn
            cden.add(step_alpha_, step_alpha_par_);
            Real num = cnum.sinpi();
            Real den = cden.sinpi();
            if (abs(den) < Real(kSineGuard))
              raise(errc::near_rational_alpha,
                    "sin(pi alpha j) below 1e-14 at j = " + std::to_string(nn), nn);
            Real cs_prev = cs_cache.back();
            while (static_cast<int>(cs_cache.size()) <= nn)
              cs_cache.push_back(cs_prev * num / den);
            cnum.add(step_alpha_, step_alpha_par_);
            if (kind_ == CoeffKind::b) {
              if (static_cast<double>(cden.dist()) < kPoleTol)
                raise(errc::near_rational_alpha,
                      "gamma argument -m-alpha*n within 1e-12 of a pole at n = " +
                          std::to_string(nn),
                      nn);
              colsin.push_back(cden.sinpi());
            }
          } else if (kind_ == CoeffKind::b) {
            colsin.push_back(Real(0));  // unused placeholder
          }
          Real base = (kind_ == CoeffKind::a) ? alpha_ * (rho_ + nn) : alpha_ * nn;
          colbase.push_back(base);
          colgamma.push_back(kind_ == CoeffKind::a ? Real(1) / tgamma(base)
                                                   : tgamma(Real(1) + base));
        }
        const size_t ci = static_cast<size_t>(n - n_lo);
        if (m > 0 && colrow_.size() > ci && colrow_[ci] == m - 1) {
          // bring the column gamma from row m-1 to row m
          if (kind_ == CoeffKind::a)
            colgamma[ci] /= colbase[ci] + (m - 1);
          else
            colgamma[ci] *= colbase[ci] + m;
        }
        if (colrow_.size() <= ci) colrow_.resize(ci + 1, 0);
        colrow_[ci] = m;

        Real value;
        if (row_near_integer && !(m == 0 && n == 0 && srow.frac <= Real(0.5))) {
          value = Real(0);  // reciprocal gamma sits on a pole: exact zero
        } else if (kind_ == CoeffKind::a) {
          value = Real(sgn_m) * row_pref * rowgamma * colgamma[ci] * rs_run *
                  cs_cache[static_cast<size_t>(n)];
        } else {
          const int sgn = (n % 2 == 0) ? -1 : 1;  // (-1)^(n+1)
          value = Real(sgn) * (colsin[ci] / pi_) * colgamma[ci] * rowgamma * rs_run *
                  cs_cache[static_cast<size_t>(n)];
        }
        visit(m, n, value);

        // advance the row gamma state to n+1
        if (kind_ == CoeffKind::a)
          rowgamma *= rho_ + mval + n;
        else
          rowgamma /= Real(1) + n + mval;
      }
    }
  }

  std::vector<Real> rs_cache;  // cumulative row sine-ratio products
  std::vector<Real> cs_cache;  // cumulative column sine-ratio products

 private:
  CoeffKind kind_;
  Real alpha_{}, recip_{}, rho_{}, pi_{};
  Real step_recip_{}, step_alpha_{};
  int step_recip_par_ = 1, step_alpha_par_ = 1;
  std::vector<int> colrow_;  // last row that advanced each column gamma
};

}  // namespace detail
}  // namespace stablesup
