#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sahr {

enum class ErrorKind {
  InvalidSpec,
  ParseError,
  DegenerateInput,
  UnsupportedDimension,
  BoundUnmet,
  OutOfBox,
  InsufficientDensity,
  IterationLimit,
  SelectionFailed,
  RetryExhausted,
  SearchFailed,
  SampleTooLarge,
  TooLarge,
};

std::string_view to_string(ErrorKind kind);

// True for kinds that signal a broken contract rather than bad input.
bool is_contract_failure(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sahr
