// SPDX-License-Identifier: Apache-2.0

#ifndef LANEMOD_ERROR_HPP
#define LANEMOD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lanemod {

enum class ErrorCode {
  invalid_modulus,
  profile_violation,
  range_error,
  unsupported_transform_size,
  size_overflow,
  modulus_mismatch,
  dimension_mismatch,
  parse_error,
  usage_error,
};

const char* to_string(ErrorCode code) noexcept;

/// Recoverable failure reported by context construction and the high level
/// operations (plans, products, file parsing).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by checked builds when a caller breaks a kernel precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_modulus: return "invalid-modulus";
    case ErrorCode::profile_violation: return "profile-violation";
    case ErrorCode::range_error: return "range-error";
    case ErrorCode::unsupported_transform_size: return "unsupported-transform-size";
    case ErrorCode::size_overflow: return "size-overflow";
    case ErrorCode::modulus_mismatch: return "modulus-mismatch";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::usage_error: return "usage-error";
  }
  return "unknown";
}

namespace detail {

[[noreturn]] inline void contract_failure(const char* expr, const char* file, int line) {
  throw ContractViolation(std::string(file) + ":" + std::to_string(line) +
                          ": precondition failed: " + expr);
}

}  // namespace detail
}  // namespace lanemod

// Kernel preconditions are caller obligations. They are verified only in
// checked builds (no NDEBUG, or LANEMOD_CHECKED defined).
#if !defined(NDEBUG) || defined(LANEMOD_CHECKED)
#define LANEMOD_CHECKS_ENABLED 1
#define LANEMOD_EXPECT(cond) \
  ((cond) ? static_cast<void>(0) : ::lanemod::detail::contract_failure(#cond, __FILE__, __LINE__))
#else
#define LANEMOD_CHECKS_ENABLED 0
#define LANEMOD_EXPECT(cond) static_cast<void>(0)
#endif

#endif  // LANEMOD_ERROR_HPP
