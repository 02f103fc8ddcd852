#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sololab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Machine-spec text could not be turned into a valid table.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, NonTotalTable, BadStateRef };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : Error(describe(kind, line, what)), kind_(kind), line_(line) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  /// 1-based; 0 when the error is not tied to one line (non-total table).
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  static std::string describe(Kind kind, std::size_t line, const std::string& what) {
    std::string prefix;
    switch (kind) {
      case Kind::Syntax: prefix = "syntax error"; break;
      case Kind::NonTotalTable: prefix = "non-total table"; break;
      case Kind::BadStateRef: prefix = "bad state reference"; break;
    }
    if (line > 0) prefix += " at line " + std::to_string(line);
    return prefix + ": " + what;
  }

  Kind kind_;
  std::size_t line_;
};

/// decode_I hit the end of its input before a codeword was complete.
class IncompleteCode : public Error {
 public:
  using Error::Error;
};

class InvalidWeights : public Error {
 public:
  using Error::Error;
};

class NonDyadicWeight : public Error {
 public:
  using Error::Error;
};

class BudgetTooSmall : public Error {
 public:
  using Error::Error;
};

class KraftExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace sololab
