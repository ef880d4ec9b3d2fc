#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace stablesup {

using BigInt = boost::multiprecision::cpp_int;

// Software floating-point tiers used when double cancellation diagnostics
// demand more digits.  cpp_bin_float has a huge exponent range, so series
// terms of magnitude 10^±1000 are representable directly.
using Float50 = boost::multiprecision::cpp_bin_float_50;
using Float100 = boost::multiprecision::cpp_bin_float_100;
using Float200 =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;
using Float400 =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;

template <class Real>
constexpr int decimal_digits() {
  return std::numeric_limits<Real>::digits10;
}

}  // namespace stablesup
