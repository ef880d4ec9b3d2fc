#pragma once

#include "stablesup/liouville.hpp"
#include "stablesup/real_spec.hpp"

namespace stablesup {

/// Validated parameter pair (alpha, rho) of a strictly stable process,
/// normalized so that rho is the positivity parameter P(X_1 > 0).
/// Admissible set: alpha in (0,1) with rho in (0,1), or alpha in (1,2)
/// with rho in [1 - 1/alpha, 1/alpha].  alpha = 1 and every exactly
/// rational alpha are rejected: the series representations are proved
/// only for irrational alpha, and the evaluation kernels divide by
/// sin(pi j / alpha) factors that collapse at rationals.
class StableParams {
 public:
  StableParams(RealSpec alpha, double rho, size_t class_depth = 40);

  const RealSpec& alpha() const { return alpha_; }
  const RealSpec& alpha_recip() const { return alpha_recip_; }
  double alpha_d() const { return alpha_d_; }
  double rho() const { return rho_; }
  bool alpha_below_one() const { return alpha_d_ < 1.0; }
  const LClassification& alpha_class() const { return alpha_class_; }
  size_t class_depth() const { return class_depth_; }

 private:
  RealSpec alpha_;
  RealSpec alpha_recip_;
  double alpha_d_ = 0.0;
  double rho_ = 0.0;
  size_t class_depth_ = 0;
  LClassification alpha_class_;
};

/// Tag marking (alpha, rho) as a member of the exceptional parameter
/// family rho + k = l/alpha (integer k, l), where whole rows of the
/// a-coefficients vanish.
struct CklTag {
  bool in_class = false;
  int k = 0;
  int l = 0;
  double residual = 0.0;  // |rho + k - l/alpha| at the reported (k, l)
};

/// Exhaustive scan over |k| <= k_max, 1 <= |l| <= ceil(2 (k_max + 1))
/// for |rho + k - l/alpha| <= 1e-12 (extended-precision alpha); first
/// hit in order of increasing |k|, then |l|, wins.
CklTag detect_ckl(const StableParams& params, int k_max = 50);

}  // namespace stablesup
