#pragma once

#include <stdexcept>
#include <string>

namespace spreadkit {

enum class ErrorKind {
  invalid_input,    // malformed text, broken graph invariants
  precondition,     // argument outside the documented domain
  budget_exceeded,  // enumeration would exceed its configured budget
  degenerate,       // zero variance and similar singular inputs
  non_convergence,  // iterative solver stopped before its tolerance
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::precondition, what);
}

}  // namespace spreadkit
