#include "weavesafe/error.hpp"

namespace weavesafe {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::parameter_invalid: return "invalid parameters";
    case Errc::insufficient_nodes: return "insufficient nodes";
    case Errc::secrecy_violation: return "secrecy violation";
    case Errc::cap_exceeded: return "enumeration cap exceeded";
    case Errc::singular_matrix: return "singular matrix";
    case Errc::inconsistent_system: return "inconsistent system";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::division_by_zero: return "division by zero";
    case Errc::io_error: return "i/o error";
    case Errc::format_error: return "malformed data";
    case Errc::digest_mismatch: return "digest mismatch";
  }
  return "unknown error";
}

Error::Error(Errc code, std::string_view module, const std::string& what)
    : std::runtime_error(std::string(module) + ": " + what), code_(code) {}

}  // namespace weavesafe
