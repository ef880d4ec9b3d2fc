#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "stablesup/trig_product.hpp"

using namespace stablesup;

namespace {
const double kLn2 = std::log(2.0);
}

TEST_CASE("single-factor values: sec at 1/3 and csc at 1/4") {
  auto sec3 = trig_log_product(TrigKind::sec, RealSpec::rational(1, 3), 0.0, 1);
  CHECK(sec3.rational_x);
  REQUIRE(sec3.cumulative.size() == 1);
  CHECK(sec3.cumulative[0].value == doctest::Approx(kLn2).epsilon(1e-14));

  auto csc4 = trig_log_product(TrigKind::csc, RealSpec::rational(1, 4), 0.0, 1);
  CHECK(csc4.cumulative[0].value == doctest::Approx(0.5 * kLn2).epsilon(1e-14));
}

TEST_CASE("rational csc hits its exact pole") {
  try {
    trig_log_product(TrigKind::csc, RealSpec::rational(1, 4), 0.0, 4);
    FAIL("expected singular_argument at l = 4");
  } catch (const Error& e) {
    CHECK(e.code() == errc::singular_argument);
    CHECK(e.detail() == 4);
  }
  // sec at 1/4: pole already at l = 2 (cos(pi/2) = 0)
  try {
    trig_log_product(TrigKind::sec, RealSpec::rational(1, 4), 0.0, 2);
    FAIL("expected singular_argument at l = 2");
  } catch (const Error& e) {
    CHECK(e.code() == errc::singular_argument);
    CHECK(e.detail() == 2);
  }
}

TEST_CASE("shift handling and flags") {
  CHECK_THROWS_AS(trig_log_product(TrigKind::sec, RealSpec::parse("sqrt:2"), 0.25, 10), Error);
  auto sh = trig_log_product(TrigKind::csc_shifted, RealSpec::parse("sqrt:2"), 0.25, 100);
  CHECK(sh.no_asymptotic_guarantee);
  CHECK(!sh.rational_x);
  CHECK(sh.cumulative.size() == 100);
  for (const auto& e : sh.cumulative) CHECK(std::isfinite(e.value));

  auto plain = trig_log_product(TrigKind::csc, RealSpec::parse("sqrt:2"), 0.0, 10);
  CHECK(!plain.no_asymptotic_guarantee);
}

TEST_CASE("traces telescope exactly") {
  auto x = RealSpec::parse("sqrt:2");
  auto long_tr = trig_log_product(TrigKind::sec, x, 0.0, 500);
  auto short_tr = trig_log_product(TrigKind::sec, x, 0.0, 120);
  for (size_t i = 0; i < short_tr.cumulative.size(); ++i) {
    CHECK(long_tr.cumulative[i].k == short_tr.cumulative[i].k);
    CHECK(long_tr.cumulative[i].value == short_tr.cumulative[i].value);
  }
}

TEST_CASE("product is invariant under x -> x + 2") {
  auto x = RealSpec::parse("sqrt:2");
  auto x2 = x.shifted_scaled(1, 2);
  auto a = trig_log_product(TrigKind::sec, x, 0.0, 2000);
  auto b = trig_log_product(TrigKind::sec, x2, 0.0, 2000);
  for (size_t i = 0; i < a.cumulative.size(); ++i)
    CHECK(a.cumulative[i].value ==
          doctest::Approx(b.cumulative[i].value).epsilon(1e-12));
}

TEST_CASE("incremental reduction matches direct 50-digit evaluation at k = 1e4") {
  auto x = RealSpec::parse("sqrt:2");
  auto tr = trig_log_product(TrigKind::sec, x, 0.0, 10000);
  // independent oracle: reduce l*x directly (no incremental accumulation)
  Float50 x50 = x.value<Float50>();
  Float50 sum = 0;
  const Float50 pi50 = boost::math::constants::pi<Float50>();
  for (long long l = 1; l <= 10000; ++l) {
    Float50 t = Float50(l) * x50;
    t -= floor(t);
    Float50 h = t - Float50(0.5);
    sum += -log(abs(sin(pi50 * h)));
  }
  double oracle = static_cast<double>(sum / 10000);
  CHECK(tr.cumulative.back().value == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("ergodic averages settle near ln 2 for badly approximable x") {
  double r1 = lemma1_rate(RealSpec::parse("sqrt:2"), TrigKind::sec, 100000);
  CHECK(std::abs(r1 - kLn2) <= 0.02);

  double r2 = lemma1_rate(RealSpec::parse("surd:(1+1*sqrt:5)/2"), TrigKind::csc, 100000);
  CHECK(std::abs(r2 - kLn2) <= 0.02);

  // rate sandwich from k = 1e4 onward
  auto tr = trig_log_product(TrigKind::sec, RealSpec::parse("sqrt:2"), 0.0, 100000);
  for (size_t i = 9999; i < tr.cumulative.size(); i += 997) {
    CHECK(tr.cumulative[i].value >= kLn2 - 0.05);
    CHECK(tr.cumulative[i].value <= kLn2 + 0.05);
  }

  CHECK_THROWS_AS(lemma1_rate(RealSpec::rational(1, 3), TrigKind::sec, 10), Error);

  // k_max = 1: no averaging, just the single factor at sqrt 2
  double r3 = lemma1_rate(RealSpec::parse("sqrt:2"), TrigKind::sec, 1);
  double t = std::sqrt(2.0) - 1.0;  // frac(sqrt 2)
  CHECK(r3 == doctest::Approx(-std::log(std::abs(std::cos(std::acos(-1.0) * t)))).epsilon(1e-12));
}

TEST_CASE("long-run average over a million factors stays within 0.01 of ln 2") {
  double r = lemma1_rate(RealSpec::parse("sqrt:2"), TrigKind::sec, 1000000);
  CHECK(std::abs(r - kLn2) <= 0.01);
}

TEST_CASE("csv export shape") {
  auto tr = trig_log_product(TrigKind::csc, RealSpec::parse("sqrt:3"), 0.0, 5);
  std::ostringstream os;
  export_csv(tr, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,normalized_log_product");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
}
