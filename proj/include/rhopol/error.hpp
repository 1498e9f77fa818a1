#pragma once

#include <stdexcept>
#include <string>

namespace rhopol {

struct SourcePos {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Any diagnostic tied to a location in an input text.
class LocatedError : public Error {
 public:
  LocatedError(SourcePos pos, const std::string& msg)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + msg),
        pos_(pos),
        detail_(msg) {}

  SourcePos pos() const { return pos_; }
  const std::string& detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

class ParseError : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

// Unbound identifiers, def arity mismatches and similar scoping problems.
class ScopeError : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

class UnsupportedConstruct : public LocatedError {
 public:
  UnsupportedConstruct(SourcePos pos, std::string construct)
      : LocatedError(pos, "unsupported construct: " + construct),
        construct_(std::move(construct)) {}
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class StaleRedexError : public Error {
 public:
  using Error::Error;
};

}  // namespace rhopol
