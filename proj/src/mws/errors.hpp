#ifndef MWS_ERRORS_HPP
#define MWS_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mws {

// Bad arguments or physically meaningless input.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested value cannot be reached within hardware limits (e.g. a
// tunneling probability outside what depths in [0, 30] E_r can realize).
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical result failed its built-in accuracy check (truncation,
// grid overflow, non-convergence).
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ValidationIssue {
  int line = 0;  // 0 when not tied to a source line
  std::string message;
};

// Aggregated scenario validation failure; carries every issue found.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<ValidationIssue>& issues) {
    std::string out = "scenario validation failed:";
    for (const auto& it : issues) {
      out += "\n  ";
      if (it.line > 0) out += "line " + std::to_string(it.line) + ": ";
      out += it.message;
    }
    return out;
  }

  std::vector<ValidationIssue> issues_;
};

}  // namespace mws

#endif
