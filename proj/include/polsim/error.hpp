#pragma once

#include <stdexcept>
#include <string>

namespace polsim {

// Mirrors the numeric codes exposed through the C API (polsim.h).
enum class ErrorCode : int {
  invalid_argument = 1,
  out_of_bounds = 2,
  config = 3,
  io = 4,
  format = 5,
  cfl = 6,
  numeric = 7,
  not_stored = 8,
  unsupported = 9,
  snapshot_version = 10,
  snapshot_truncated = 11,
  snapshot_count = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polsim
