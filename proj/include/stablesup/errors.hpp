#pragma once

#include <stdexcept>
#include <string>

namespace stablesup {

/// Machine-readable failure categories, mirrored by the CLI exit codes.
enum class errc {
  parse,               // malformed input (RealSpec grammar, CLI values)
  validation,          // parameters outside the admissible domain
  division_by_zero,    // signed-log division by a zero value
  gamma_pole,          // gamma argument within tolerance of a pole
  near_rational_alpha, // sine denominator collapses, alpha too close to p/q
  singular_argument,   // trig product argument within tolerance of a pole
  depth_exceeded,      // more convergents requested than expanded
  resource_limit,      // big-integer bit budget exhausted
  hypothesis,          // operation requires alpha outside the exceptional set
  strip_violation,     // Mellin argument outside the admissible vertical strip
  bracket_failure,     // quantile bracketing failed (should not happen)
  internal,
};

const char* errc_name(errc c);

/// Library error: category + message + optional integer detail
/// (pole index, offending j, ...).
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what, long long detail = -1)
      : std::runtime_error(what), code_(code), detail_(detail) {}

  errc code() const { return code_; }
  long long detail() const { return detail_; }

 private:
  errc code_;
  long long detail_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg, long long detail = -1) {
  throw Error(code, msg, detail);
}

}  // namespace stablesup
