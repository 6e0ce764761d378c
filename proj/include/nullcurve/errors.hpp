#pragma once

#include <stdexcept>
#include <string>

namespace nullcurve {

enum class ErrorKind {
  domain,
  invalid_argument,
  nonzero_residue,
  aliasing,
  non_holomorphic,
  not_null,
  unsupported_zeros,
  pole,
  not_in_sl2,
  not_in_h3,
  period_obstruction,
  non_dominating_spray,
  convergence,
  tolerance_unachievable,
  degree,
  degenerate_immersion,
  unknown_name,
  io,
};

const char* to_string(ErrorKind kind);

/// Base of every error raised by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for numerical failures where the input was valid but a tolerance
  /// could not be met.
  bool is_tolerance_failure() const noexcept {
    return kind_ == ErrorKind::tolerance_unachievable ||
           kind_ == ErrorKind::convergence;
  }

 private:
  ErrorKind kind_;
};

}  // namespace nullcurve
