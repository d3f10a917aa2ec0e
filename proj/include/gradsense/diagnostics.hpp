#pragma once

#include <atomic>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gradsense {

/// Numerical failure inside a simulation (step underflow, norm drift,
/// truncation overflow). Carries a human-readable diagnostic.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters that violate a documented precondition of a closed form or builder.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace diagnostics {

inline std::atomic<bool>& warnings_enabled() {
  static std::atomic<bool> enabled{true};
  return enabled;
}

inline void warn(std::string_view message) {
  if (warnings_enabled().load(std::memory_order_relaxed)) {
    std::clog << "warning: " << message << '\n';
  }
}

}  // namespace diagnostics
}  // namespace gradsense
