#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "stablesup/density.hpp"

using namespace stablesup;

namespace {

// alpha = sqrt(2), rho = 1/2 (spectrally symmetric)
StableParams above_one() { return StableParams(RealSpec::sqrt_of(2), 0.5); }

// alpha = sqrt(2)/2, rho = 2/5
StableParams below_one() {
  return StableParams(RealSpec::parse("surd:(0+1*sqrt:2)/2"), 0.4);
}

// surd within 1e-16 of the rational 99/70: both sine guards pass by a
// factor below three, so the run is accepted but heavily amplified
const char* kNearRationalSurd =
    "surd:(19800000000000000+1*sqrt:2)/14000000000000000";

// 30-digit window around an alpha with a certified super-exponential
// rational approximation (accepted at construction, convergent-mode
// evaluation must refuse it)
const char* kWitnessedAlpha = "1.679999999952316284350217755973";

double rel(double got, double expect) {
  return std::fabs(got - expect) / std::fabs(expect);
}

// converged result whose reported error honours the requested tolerance
void check_converged(const SeriesResult& r, double eps) {
  CHECK(r.status == SeriesStatus::converged);
  CHECK(r.est_error <= eps);
  CHECK(std::isfinite(r.value));
}

// Reference values from a fifty-digit direct summation of the defining
// expansions, carried far beyond the working truncation (truncation error
// below 1e-20 unless noted).
constexpr double kP1_1 = 0.35981877986705798;      // p(1),   alpha = sqrt2
constexpr double kP1_2 = 0.12740810781195828;      // p(2)
constexpr double kP1_3 = 0.045565507175397969;     // p(3)
constexpr double kP1_5 = 0.0104050617586301;       // p(5)
constexpr double kP1_10 = 0.0015355273705471;      // p(10)
constexpr double kF1_1 = 0.61891401528476;         // F(1)
constexpr double kF1_2 = 0.84609452242740604;      // F(2)
constexpr double kF1_44 = 0.96204056778346033;     // F(4.4)
constexpr double kMedian1 = 0.710241440831;        // F^{-1}(1/2)

constexpr double kP2_05 = 0.310599217005052;       // p(0.5), alpha = sqrt2/2
constexpr double kP2_1 = 0.13708082174721;         // p(1)
constexpr double kP2_5 = 0.0128410957391021;       // p(5)
constexpr double kP2_015 = 0.9080357458195452;     // p(0.15)
constexpr double kP2_005 = 1.973956813586921;      // p(0.05)
constexpr double kF2_02 = 0.4988566706626167;      // F(0.2)
constexpr double kF2_03 = 0.5596894357928153;      // F(0.3)
constexpr double kF2_1 = 0.741759653345785;        // F(1)
constexpr double kF2_100 = 0.987783976338696;      // F(100)
constexpr double kMedian2 = 0.2015806349220056;    // F^{-1}(1/2)

}  // namespace

// ---------------------------------------------------------------------------
// density values against the references

TEST_CASE("density matches references for alpha above one") {
  StableParams P = above_one();
  SeriesResult r1 = density(P, 1.0, 1e-12);
  check_converged(r1, 1e-12);
  CHECK(rel(r1.value, kP1_1) < 5e-12);
  CHECK(r1.mode == EvalMode::convergent);

  SeriesResult r2 = density(P, 2.0, 1e-12);
  check_converged(r2, 1e-12);
  CHECK(rel(r2.value, kP1_2) < 5e-12);

  SeriesResult r3 = density(P, 3.0, 1e-12);
  check_converged(r3, 1e-12);
  CHECK(rel(r3.value, kP1_3) < 5e-12);

  // far side: optimally truncated expansion carries the point
  SeriesResult r5 = density(P, 5.0, 1e-8);
  check_converged(r5, 1e-8);
  CHECK(rel(r5.value, kP1_5) < 1e-10);
  CHECK(r5.mode == EvalMode::asymptotic);

  SeriesResult r10 = density(P, 10.0, 1e-10);
  check_converged(r10, 1e-10);
  CHECK(rel(r10.value, kP1_10) < 1e-12);
}

TEST_CASE("density matches references for alpha below one") {
  StableParams P = below_one();
  SeriesResult r1 = density(P, 0.5, 1e-12);
  check_converged(r1, 1e-12);
  CHECK(rel(r1.value, kP2_05) < 5e-12);
  CHECK(r1.mode == EvalMode::convergent);

  SeriesResult r2 = density(P, 1.0, 1e-12);
  check_converged(r2, 1e-12);
  CHECK(rel(r2.value, kP2_1) < 5e-12);

  SeriesResult r3 = density(P, 5.0, 1e-12);
  check_converged(r3, 1e-12);
  CHECK(rel(r3.value, kP2_5) < 5e-12);

  // crossover region: the summed representation still settles here
  SeriesResult rc = density(P, 0.15, 1e-12);
  check_converged(rc, 1e-12);
  CHECK(rel(rc.value, kP2_015) < 1e-11);
  CHECK(rc.mode == EvalMode::convergent);

  // small-x side handled by the truncated expansion
  SeriesResult rs = density(P, 0.05, 1e-10);
  check_converged(rs, 1e-10);
  CHECK(rel(rs.value, kP2_005) < 1e-11);
  CHECK(rs.mode == EvalMode::asymptotic);
}

// ---------------------------------------------------------------------------
// agreement between the two representations where both are usable

TEST_CASE("summed and truncated evaluations agree in the overlap") {
  StableParams P1 = above_one();
  SeriesResult conv = density(P1, 5.0, 1e-8, EvalMode::convergent);
  SeriesResult asym = density(P1, 5.0, 1e-8, EvalMode::asymptotic);
  check_converged(conv, 1e-8);
  check_converged(asym, 1e-8);
  CHECK(rel(conv.value, asym.value) < 1e-4);

  StableParams P2 = below_one();
  SeriesResult conv2 = density(P2, 0.15, 1e-10, EvalMode::convergent);
  SeriesResult asym2 = density(P2, 0.15, 1e-10, EvalMode::asymptotic);
  check_converged(conv2, 1e-10);
  CHECK(rel(conv2.value, asym2.value) < 1e-4);
}

TEST_CASE("forcing the truncated expansion on its wrong side reports the floor") {
  StableParams P = above_one();
  SeriesResult r = density(P, 1.0, 1e-10, EvalMode::asymptotic);
  CHECK(r.status == SeriesStatus::asymptotic_floor);
  CHECK(r.est_error > 1e-6);
  CHECK(std::isfinite(r.value));
}

// ---------------------------------------------------------------------------
// tolerance behaviour

TEST_CASE("tolerance refinement is self-consistent") {
  StableParams P = above_one();
  SeriesResult coarse = density(P, 1.0, 1e-6);
  SeriesResult fine = density(P, 1.0, 1e-13);
  check_converged(coarse, 1e-6);
  check_converged(fine, 1e-13);
  CHECK(rel(coarse.value, fine.value) < 1e-5);
  CHECK(fine.terms_used > coarse.terms_used);

  StableParams Q = below_one();
  SeriesResult qc = density(Q, 0.5, 1e-6);
  SeriesResult qf = density(Q, 0.5, 1e-13);
  CHECK(rel(qc.value, qf.value) < 1e-5);
}

// ---------------------------------------------------------------------------
// global shape

TEST_CASE("density is positive and finite across the support") {
  for (bool above : {true, false}) {
    StableParams P = above ? above_one() : below_one();
    for (double lx = -3.0; lx <= 3.01; lx += 0.5) {
      const double x = std::pow(10.0, lx);
      SeriesResult r = density(P, x, 1e-8);
      CAPTURE(above);
      CAPTURE(x);
      check_converged(r, 1e-8);
      CHECK(r.value > 0.0);
    }
  }
}

TEST_CASE("leading-order constants at both ends of the support") {
  const double pi = 3.14159265358979323846;
  for (bool above : {true, false}) {
    StableParams P = above ? above_one() : below_one();
    const double a = P.alpha_d();
    const double rho = P.rho();
    // x -> 0: p(x) ~ x^{alpha rho - 1} sin(pi rho) Gamma(rho) /
    //                 (pi Gamma(alpha rho)); corrections decay like
    //                 x^{min(1, alpha)}, so push x0 smaller when alpha < 1
    const double lead0 =
        std::sin(pi * rho) * std::tgamma(rho) / (pi * std::tgamma(a * rho));
    const double x0 = above ? 1e-4 : 1e-6;
    SeriesResult r0 = density(P, x0, 1e-10);
    CHECK(rel(r0.value * std::pow(x0, 1.0 - a * rho), lead0) < 1e-3);
    // x -> inf: p(x) ~ x^{-1-alpha} alpha Gamma(alpha) sin(pi alpha rho) / pi
    const double leadInf =
        a * std::tgamma(a) * std::sin(pi * a * rho) / pi;
    const double xb = 1e4;
    SeriesResult rb = density(P, xb, 1e-10);
    CHECK(rel(rb.value * std::pow(xb, 1.0 + a), leadInf) < 1e-3);
  }
}

// ---------------------------------------------------------------------------
// distribution function

TEST_CASE("cdf matches references") {
  StableParams P1 = above_one();
  CHECK(rel(cdf(P1, 1.0, 1e-12).value, kF1_1) < 5e-12);
  CHECK(rel(cdf(P1, 2.0, 1e-12).value, kF1_2) < 5e-12);
  // deep in the crossover the truncation floor limits the accuracy; the
  // reference is exact, the evaluation is floor-limited near 3e-11
  CHECK(rel(cdf(P1, 4.4, 1e-10).value, kF1_44) < 1e-9);

  StableParams P2 = below_one();
  CHECK(rel(cdf(P2, 0.2, 1e-12).value, kF2_02) < 5e-12);
  CHECK(rel(cdf(P2, 0.3, 1e-12).value, kF2_03) < 5e-12);
  CHECK(rel(cdf(P2, 1.0, 1e-12).value, kF2_1) < 5e-12);
  CHECK(rel(cdf(P2, 100.0, 1e-12).value, kF2_100) < 5e-12);
}

TEST_CASE("cdf is monotone, within [0,1], and reaches 1 in the tail") {
  for (bool above : {true, false}) {
    StableParams P = above ? above_one() : below_one();
    double prev = -1.0;
    for (double lx = -3.0; lx <= 3.01; lx += 0.5) {
      const double x = std::pow(10.0, lx);
      const double F = cdf(P, x, 1e-9).value;
      CAPTURE(above);
      CAPTURE(x);
      CHECK(F >= 0.0);
      CHECK(F <= 1.0);
      CHECK(F >= prev - 1e-11);
      prev = F;
    }
  }
  const double far = cdf(above_one(), 1e6, 1e-10).value;
  CHECK(far <= 1.0);
  CHECK(far >= 1.0 - 1e-8);
}

TEST_CASE("cdf increments recover the density") {
  const double h = 1e-4;
  StableParams P1 = above_one();
  const double d1 =
      (cdf(P1, 1.0 + h, 1e-12).value - cdf(P1, 1.0 - h, 1e-12).value) / (2 * h);
  CHECK(rel(d1, density(P1, 1.0, 1e-12).value) < 1e-6);

  StableParams P2 = below_one();
  const double d2 =
      (cdf(P2, 0.5 + h, 1e-12).value - cdf(P2, 0.5 - h, 1e-12).value) / (2 * h);
  CHECK(rel(d2, density(P2, 0.5, 1e-12).value) < 1e-6);
}

TEST_CASE("upper tail complements the cdf") {
  StableParams P = above_one();
  for (double x : {1.0, 2.0, 4.4}) {
    const double sum = cdf(P, x, 1e-10).value + upper_tail(P, x, 1e-10).value;
    CHECK(std::fabs(sum - 1.0) < 1e-8);
  }
}

TEST_CASE("total probability mass is unity for both parameter sets") {
  // low side summed one way, tail the other: the sum genuinely
  // cross-checks the two expansions
  SeriesResult m1 = total_mass(above_one(), 1e-8);
  check_converged(m1, 1e-8);
  CHECK(std::fabs(m1.value - 1.0) < 1e-8);

  SeriesResult m2 = total_mass(below_one(), 1e-8);
  check_converged(m2, 1e-8);
  CHECK(std::fabs(m2.value - 1.0) < 1e-8);
}

// ---------------------------------------------------------------------------
// quantiles

TEST_CASE("quantile inverts the cdf") {
  StableParams P = above_one();
  for (double x0 : {0.1, 1.0, 5.0}) {
    const double u = cdf(P, x0, 1e-12).value;
    const double xq = quantile(P, u, 1e-10);
    CAPTURE(x0);
    CHECK(rel(xq, x0) < 1e-9);
  }
  CHECK(std::fabs(quantile(P, 0.5, 1e-10) - kMedian1) < 1e-8);
  CHECK(std::fabs(quantile(below_one(), 0.5, 1e-10) - kMedian2) < 1e-8);

  const double q25 = quantile(P, 0.25, 1e-8);
  const double q50 = quantile(P, 0.50, 1e-8);
  const double q75 = quantile(P, 0.75, 1e-8);
  CHECK(q25 < q50);
  CHECK(q50 < q75);
}

TEST_CASE("quantile rejects probabilities outside the open unit interval") {
  StableParams P = above_one();
  for (double u : {0.0, 1.0, -0.5, 1.5}) {
    try {
      quantile(P, u, 1e-8);
      FAIL("expected a validation error for u = " << u);
    } catch (const Error& e) {
      CHECK(e.code() == errc::validation);
    }
  }
}

// ---------------------------------------------------------------------------
// scaling

TEST_CASE("rescaled density obeys the self-similar scaling") {
  StableParams P = above_one();
  const double t = 2.0, x = 1.0;
  const double s = std::pow(t, -1.0 / P.alpha_d());
  const double direct = s * density(P, s * x, 1e-12).value;
  SeriesResult r = rescaled_density(P, t, x, 1e-12);
  check_converged(r, 1e-12);
  CHECK(rel(r.value, direct) < 1e-14);
  CHECK(rel(r.value, 0.30774879673706507) < 1e-11);
}

// ---------------------------------------------------------------------------
// refusal and honest failure

TEST_CASE("witnessed alpha blocks only the summed representation") {
  StableParams P(RealSpec::parse(kWitnessedAlpha), 0.5);
  try {
    density(P, 1.0, 1e-8, EvalMode::convergent);
    FAIL("expected a hypothesis error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis);
  }
  // automatic evaluation falls back to the truncated expansion
  SeriesResult r = density(P, 6.0, 1e-8);
  check_converged(r, 1e-8);
  CHECK(r.mode == EvalMode::asymptotic);
}

TEST_CASE("convergent-mode failure is reported, never masked") {
  StableParams P = above_one();
  SeriesResult r = density(P, 10.0, 1e-8, EvalMode::convergent);
  CHECK(r.status == SeriesStatus::not_converged);
  CHECK(r.est_error > 1.0);
  CHECK(r.peak_log10_term > 50.0);  // the cancellation wall, visible
  CHECK(r.T_used == doctest::Approx(400.0));
  // the same point is routine for the automatic mode
  SeriesResult ok = density(P, 10.0, 1e-8);
  check_converged(ok, 1e-8);
  CHECK(rel(ok.value, kP1_10) < 1e-12);
}

TEST_CASE("near-rational surd alpha runs honestly under amplification") {
  StableParams P(RealSpec::parse(kNearRationalSurd), 0.5);

  // away from the amplified indices everything is ordinary
  SeriesResult small = density(P, 1.0, 1e-10, EvalMode::convergent);
  check_converged(small, 1e-10);
  CHECK(small.value > 0.0);

  // the amplified rows/columns blow up intermediate terms by ~1e13;
  // the evaluation still settles, and the blow-up stays on record
  SeriesResult mid = density(P, 5.0, 1e-10, EvalMode::convergent);
  check_converged(mid, 1e-10);
  CHECK(mid.peak_log10_term > 25.0);
  SeriesResult ref = density(above_one(), 5.0, 1e-10, EvalMode::convergent);
  CHECK(mid.peak_log10_term > ref.peak_log10_term + 15.0);

  // far out, amplification on top of the usual growth defeats the cap
  SeriesResult far = density(P, 8.0, 1e-10, EvalMode::convergent);
  CHECK(far.status == SeriesStatus::not_converged);
  CHECK(far.est_error > 1e-2);
  CHECK(far.peak_log10_term > 50.0);

  // while the automatic mode simply switches representation
  SeriesResult easy = density(P, 8.0, 1e-10);
  check_converged(easy, 1e-10);
  CHECK(easy.mode == EvalMode::asymptotic);
}

// ---------------------------------------------------------------------------
// input validation and determinism

TEST_CASE("invalid evaluation inputs are rejected") {
  StableParams P = above_one();
  auto code = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return errc::internal;
  };
  CHECK(code([&] { density(P, 0.0, 1e-8); }) == errc::validation);
  CHECK(code([&] { density(P, -1.0, 1e-8); }) == errc::validation);
  CHECK(code([&] {
          density(P, std::numeric_limits<double>::infinity(), 1e-8);
        }) == errc::validation);
  CHECK(code([&] {
          density(P, std::numeric_limits<double>::quiet_NaN(), 1e-8);
        }) == errc::validation);
  CHECK(code([&] { density(P, 1.0, 1e-15); }) == errc::validation);
  CHECK(code([&] { density(P, 1.0, 0.5); }) == errc::validation);
  CHECK(code([&] { rescaled_density(P, 0.0, 1.0, 1e-8); }) == errc::validation);
  CHECK(code([&] { rescaled_density(P, -2.0, 1.0, 1e-8); }) == errc::validation);
}

TEST_CASE("evaluation is deterministic") {
  StableParams P = above_one();
  SeriesResult a = density(P, 2.0, 1e-12);
  SeriesResult b = density(P, 2.0, 1e-12);
  CHECK(a.value == b.value);
  CHECK(a.est_error == b.est_error);
  CHECK(a.terms_used == b.terms_used);

  StableParams Q = below_one();
  CHECK(quantile(Q, 0.5, 1e-10) == quantile(Q, 0.5, 1e-10));
}
