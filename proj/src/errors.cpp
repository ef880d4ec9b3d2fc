#include "stablesup/errors.hpp"

namespace stablesup {

const char* errc_name(errc c) {
  switch (c) {
    case errc::parse: return "parse";
    case errc::validation: return "validation";
    case errc::division_by_zero: return "division_by_zero";
    case errc::gamma_pole: return "gamma_pole";
    case errc::near_rational_alpha: return "near_rational_alpha";
    case errc::singular_argument: return "singular_argument";
    case errc::depth_exceeded: return "depth_exceeded";
    case errc::resource_limit: return "resource_limit";
    case errc::hypothesis: return "hypothesis";
    case errc::strip_violation: return "strip_violation";
    case errc::bracket_failure: return "bracket_failure";
    case errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace stablesup
