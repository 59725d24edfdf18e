#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weavesafe {

// Error categories. The CLI maps these onto its exit codes.
enum class Errc {
  invalid_argument,
  parameter_invalid,
  insufficient_nodes,
  secrecy_violation,
  cap_exceeded,
  singular_matrix,
  inconsistent_system,
  dimension_mismatch,
  division_by_zero,
  io_error,
  format_error,
  digest_mismatch,
};

std::string_view to_string(Errc code);

// All library failures are reported as weavesafe::Error. The message is
// prefixed with the originating module, e.g. "pm_mbr: k must be >= 2".
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string_view module, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace weavesafe
