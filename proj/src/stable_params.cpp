#include "stablesup/stable_params.hpp"

#include <cmath>

namespace stablesup {

namespace {
// slack for the closed rho interval at alpha > 1: the endpoints
// 1 -/+ 1/alpha are irrational, so a double rho sitting on the boundary
// is off by rounding only
constexpr double kBoundarySlack = 1e-14;
}  // namespace

StableParams::StableParams(RealSpec alpha, double rho, size_t class_depth)
    : alpha_(std::move(alpha)), rho_(rho), class_depth_(class_depth) {
  Float50 a50 = alpha_.value<Float50>();
  if (!(a50 > 0 && a50 < 2))
    raise(errc::validation, "alpha must lie in (0,1) or (1,2), got " + alpha_.str());
  if (a50 == 1) raise(errc::validation, "alpha = 1 is excluded (rational)");

  alpha_class_ = classify_L(alpha_, class_depth_);
  if (alpha_class_.verdict == LVerdict::rational)
    raise(errc::validation,
          "alpha " + alpha_.str() + " is exactly rational; the series hypotheses fail");

  alpha_d_ = alpha_.approx();
  alpha_recip_ = alpha_.reciprocal();

  if (a50 < 1) {
    if (!(rho_ > 0.0 && rho_ < 1.0))
      raise(errc::validation, "for alpha < 1, rho must lie in (0,1)");
  } else {
    Float50 hi = Float50(1) / a50;
    Float50 lo = Float50(1) - hi;
    Float50 r50 = Float50(rho_);
    if (r50 < lo - Float50(kBoundarySlack) || r50 > hi + Float50(kBoundarySlack))
      raise(errc::validation,
            "for alpha > 1, rho must lie in [1 - 1/alpha, 1/alpha]");
  }
}

CklTag detect_ckl(const StableParams& params, int k_max) {
  if (k_max < 1) raise(errc::validation, "k_max must be >= 1");
  const int l_max = static_cast<int>(std::ceil(2.0 * (k_max + 1)));
  const Float50 recip = params.alpha_recip().value<Float50>();
  const Float50 rho(params.rho());
  const Float50 tol(1e-12);

  std::vector<int> ks{0};
  for (int a = 1; a <= k_max; ++a) {
    ks.push_back(-a);
    ks.push_back(a);
  }
  for (int k : ks) {
    for (int al = 1; al <= l_max; ++al) {
      for (int l : {-al, al}) {
        Float50 res = rho + k - l * recip;
        if (res < 0) res = -res;
        if (res <= tol) return {true, k, l, static_cast<double>(res)};
      }
    }
  }
  return {};
}

}  // namespace stablesup
