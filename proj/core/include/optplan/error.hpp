#pragma once

#include <stdexcept>
#include <string>

namespace optplan {

/// Failure categories. Each one maps to a distinct CLI exit code.
enum class ErrorKind {
  kInput,        // malformed or invalid input data
  kInfeasible,   // the requested target cannot be met
  kBudget,       // an enumeration cap was exceeded
  kConvergence,  // an iterative solver hit its iteration cap
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error input_error(const std::string& what) {
  return Error(ErrorKind::kInput, what);
}
inline Error infeasible_error(const std::string& what) {
  return Error(ErrorKind::kInfeasible, what);
}
inline Error budget_error(const std::string& what) {
  return Error(ErrorKind::kBudget, what);
}

}  // namespace optplan
