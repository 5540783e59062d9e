#pragma once

#include <stdexcept>
#include <string>

namespace ribamp {

// Error classes map onto process exit codes in the CLI:
//   ParseError  -> 2   (bad input files / malformed requests)
//   MathError   -> 3   (domain violations: vanishing propagators, poles, ...)
//   BudgetError -> 4   (work would exceed a configured combinatorial budget)
// The `code` string is a stable machine-readable tag; `what()` carries the
// human-readable detail including the offending dart/leg/index.

class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class MathError : public Error {
public:
  using Error::Error;
};

class BudgetError : public Error {
public:
  using Error::Error;
};

}  // namespace ribamp
