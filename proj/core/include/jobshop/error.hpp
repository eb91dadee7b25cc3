#pragma once

#include <stdexcept>
#include <string>

namespace jobshop {

// Base for all data-level failures (bad input files, contract violations,
// infeasible schedules). The CLI maps these to exit code 2; usage errors
// are handled by the argument parser and map to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line/column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(what), line(line), column(column) {}
  int line;
  int column;
};

// Structurally well-formed input that violates a semantic invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Machine order contradicts job precedence: no feasible timing exists.
class CycleError : public Error {
 public:
  using Error::Error;
};

}  // namespace jobshop
