#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cld {

// Failure codes raised by library operations. Validation problems and parse
// diagnostics are returned as data and never use these.
enum class ErrorCode {
  invalid_argument,
  io,
  parse,
  duplicate_in_sequence,
  edge_missing,
  cycle_limit,
  unverified_loop,
  inconsistent_solution,
  unknown_polarity,
  unknown_reference,
  invalid_scenario,
  numeric_blowup,
  corpus_corrupt,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cld
