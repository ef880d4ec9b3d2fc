#include "stablesup/coefficients.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace stablesup {

namespace {

constexpr double kLn10 = 2.302585092994045684;

using SL50 = SignedLog<Float50>;

/// sin(pi (mult x + shift)) driven by the exact representation of x.
SL50 sin_reduced(const RealSpec& x, long long mult, const Float50& shift) {
  auto r = reduce_scaled<Float50>(x, mult, shift);
  return sinpi_reduced<Float50>(r.frac, r.parity, r.exact_integer);
}

const double kLogSineGuard = std::log(detail::kSineGuard);

void guard_denominator(const SL50& den, const char* what, long long j) {
  if (den.sign == 0 || den.logabs < Float50(kLogSineGuard))
    raise(errc::near_rational_alpha,
          std::string(what) + " below 1e-14 at j = " + std::to_string(j), j);
}

/// Product over j <= m of sin(pi (rho + (j-1)/alpha)) / sin(pi j/alpha).
SL50 row_product(const StableParams& P, int m) {
  SL50 acc = SL50::one();
  const Float50 rho(P.rho());
  for (int j = 1; j <= m; ++j) {
    SL50 num = sin_reduced(P.alpha_recip(), j - 1, rho);
    SL50 den = sin_reduced(P.alpha_recip(), j, Float50(0));
    guard_denominator(den, "sin(pi j/alpha)", j);
    acc = slv_mul(acc, slv_div(num, den));
  }
  return acc;
}

/// Product over j <= n of sin(pi alpha (rho + j - 1)) / sin(pi alpha j).
SL50 col_product(const StableParams& P, int n) {
  SL50 acc = SL50::one();
  const Float50 ar = P.alpha().value<Float50>() * Float50(P.rho());
  for (int j = 1; j <= n; ++j) {
    SL50 num = sin_reduced(P.alpha(), j - 1, ar);
    SL50 den = sin_reduced(P.alpha(), j, Float50(0));
    guard_denominator(den, "sin(pi alpha j)", j);
    acc = slv_mul(acc, slv_div(num, den));
  }
  return acc;
}

SignedLogValue to_value(const SL50& v) {
  if (v.sign == 0) return SignedLogValue::zero();
  return {v.sign, static_cast<double>(v.logabs)};
}

SL50 sign_term(int m, int n) {
  return SL50::from_log(((m + n) % 2 == 0) ? 1 : -1, Float50(0));
}

void check_indices(int m, int n, int n_lo) {
  if (m < 0 || n < n_lo)
    raise(errc::validation, "coefficient index out of range (m >= 0, n >= " +
                                std::to_string(n_lo) + ")");
}

SL50 coeff_a_50(const StableParams& P, int m, int n) {
  const Float50 rho(P.rho());
  const Float50 recip = P.alpha_recip().value<Float50>();
  const Float50 y = rho + n + m * recip;

  // zero pattern: 1 - rho - n - m/alpha at a nonpositive integer, i.e.
  // y within tolerance of an integer >= 1 (y < 0.5 means the nearest
  // integer is 0, which is not a pole of the reciprocal gamma)
  auto red = reduce_scaled<Float50>(P.alpha_recip(), m, rho + Float50(n));
  Float50 dist = red.frac <= Float50(0.5) ? red.frac : Float50(1) - red.frac;
  if ((red.exact_integer || dist < Float50(kPoleTol)) && y >= Float50(0.5))
    return SL50::zero();

  SL50 g1 = log_gamma_signed<Float50>(Float50(1) - y);
  const Float50 alpha = P.alpha().value<Float50>();
  SL50 g2 = log_gamma_signed<Float50>(alpha * (rho + n) + m);
  SL50 v = slv_div(sign_term(m, n), slv_mul(g1, g2));
  return slv_mul(v, slv_mul(row_product(P, m), col_product(P, n)));
}

SL50 coeff_b_50(const StableParams& P, int m, int n) {
  const Float50 recip = P.alpha_recip().value<Float50>();
  const Float50 alpha = P.alpha().value<Float50>();
  SL50 g1 = log_gamma_signed<Float50>(Float50(1) + n + m * recip);
  SL50 g2;
  try {
    g2 = log_gamma_signed<Float50>(-Float50(m) - alpha * n);
  } catch (const Error& e) {
    if (e.code() == errc::gamma_pole)
      raise(errc::near_rational_alpha,
            "gamma argument -m-alpha*n within 1e-12 of a pole at n = " +
                std::to_string(n),
            n);
    throw;
  }
  SL50 v = slv_div(sign_term(m, n), slv_mul(g1, g2));
  return slv_mul(v, slv_mul(row_product(P, m), col_product(P, n)));
}

}  // namespace

SignedLogValue coeff_a(const StableParams& params, int m, int n) {
  check_indices(m, n, 0);
  return to_value(coeff_a_50(params, m, n));
}

SignedLogValue coeff_b(const StableParams& params, int m, int n) {
  check_indices(m, n, 1);
  return to_value(coeff_b_50(params, m, n));
}

SignedLogValue coeff_b_uncancelled(const StableParams& params, int m, int n) {
  check_indices(m, n, 1);
  const Float50 rho(params.rho());
  const Float50 recip = params.alpha_recip().value<Float50>();
  const Float50 alpha = params.alpha().value<Float50>();
  const Float50 y = rho + n + m * recip;
  // the literal gamma ratio; log_gamma_signed raises on the zero rows,
  // where the ratio degenerates to 0 * inf
  SL50 num = slv_mul(log_gamma_signed<Float50>(Float50(1) - y),
                     log_gamma_signed<Float50>(alpha * (rho + n) + m));
  SL50 den = slv_mul(log_gamma_signed<Float50>(Float50(1) + n + m * recip),
                     log_gamma_signed<Float50>(-Float50(m) - alpha * n));
  return to_value(slv_mul(slv_div(num, den), coeff_a_50(params, m, n)));
}

CoefficientTable build_table(const StableParams& params, CoeffKind kind, double T) {
  CoefficientTable t(params, kind, T);
  detail::CoeffKernel<Float50> kern(params, kind);
  kern.run(T, [&](int m, int n, const Float50& v) {
    t.entries.emplace(std::pair<int, int>{m, n}, to_value(SL50::from_value(v)));
  });
  t.row_sin_cache.reserve(kern.rs_cache.size());
  for (const auto& r : kern.rs_cache)
    t.row_sin_cache.push_back(to_value(SL50::from_value(r)));
  t.col_sin_cache.reserve(kern.cs_cache.size());
  for (const auto& c : kern.cs_cache)
    t.col_sin_cache.push_back(to_value(SL50::from_value(c)));
  return t;
}

ConditionReport condition_report(const StableParams& params, double T) {
  ConditionReport rep;
  rep.T = T;
  rep.alpha_verdict = params.alpha_class().verdict;

  // ln|sin(pi<jx>)| from the exact log-distance; for distances beyond
  // double resolution sin(pi d) ~ pi d keeps everything in logs
  auto scan = [](const RealSpec& x, long long j_max, double& log10_min,
                 long long& argmin) {
    double best = std::numeric_limits<double>::infinity();
    argmin = 0;
    for (long long j = 1; j <= j_max; ++j) {
      double ld = log_dist_to_integer(x, BigInt(j));
      double ls;
      if (ld < std::log(1e-8)) {
        ls = ld + std::log(M_PI);
      } else {
        double d = std::exp(ld);
        ls = std::log(std::sin(M_PI * d));
      }
      if (ls < best) {
        best = ls;
        argmin = j;
      }
    }
    log10_min = (argmin != 0) ? best / kLn10 : 0.0;
  };

  long long rows = static_cast<long long>(std::floor(T + 1e-9));
  long long cols = static_cast<long long>(std::floor(T / params.alpha_d() + 1e-9));
  scan(params.alpha_recip(), rows, rep.log10_min_row_sin, rep.argmin_row_j);
  scan(params.alpha(), cols, rep.log10_min_col_sin, rep.argmin_col_j);
  rep.log10_amplification = -(rep.log10_min_row_sin + rep.log10_min_col_sin);
  rep.severe = rep.log10_amplification > 8.0;
  return rep;
}

namespace {

void append_double(std::string& s, double v) {
  if (std::isinf(v)) {
    s += (v > 0) ? "inf" : "-inf";
    return;
  }
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, r.ptr);
}

}  // namespace

std::string export_csv(const CoefficientTable& table) {
  std::string out = "m,n,sign,log10_abs,value_if_representable\n";
  for (const auto& [mn, v] : table.entries) {
    out += std::to_string(mn.first);
    out += ',';
    out += std::to_string(mn.second);
    out += ',';
    out += std::to_string(v.sign);
    out += ',';
    if (v.sign == 0) {
      out += "-inf,0";
    } else {
      double l10 = v.logabs / kLn10;
      append_double(out, l10);
      out += ',';
      if (std::abs(l10) < 307.5) append_double(out, v.value());
      // otherwise not representable in double: leave the field empty
    }
    out += '\n';
  }
  return out;
}

}  // namespace stablesup
