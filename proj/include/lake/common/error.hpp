#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lake {

/// Closed set of failure classes. Every service failure maps onto exactly
/// one of these, and the gateway maps each onto one HTTP status.
enum class ErrorCode {
  kValidation,
  kAuthentication,
  kForbidden,
  kNotFound,
  kConflict,
  kPreconditionFailed,
  kTransport,
  kInternal,
};

std::string_view to_string(ErrorCode code);
ErrorCode error_code_from_string(std::string_view name);

struct FieldIssue {
  std::string field;
  std::string issue;

  friend bool operator==(const FieldIssue&, const FieldIssue&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<FieldIssue> details = {})
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<FieldIssue>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<FieldIssue> details_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

inline Error validation_error(std::string field, std::string issue) {
  std::string message = "invalid field '" + field + "': " + issue;
  return Error(ErrorCode::kValidation, std::move(message), {{std::move(field), std::move(issue)}});
}

}  // namespace lake
