#include "sahr/error.hpp"

namespace sahr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::BoundUnmet: return "BoundUnmet";
    case ErrorKind::OutOfBox: return "OutOfBox";
    case ErrorKind::InsufficientDensity: return "InsufficientDensity";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::SelectionFailed: return "SelectionFailed";
    case ErrorKind::RetryExhausted: return "RetryExhausted";
    case ErrorKind::SearchFailed: return "SearchFailed";
    case ErrorKind::SampleTooLarge: return "SampleTooLarge";
    case ErrorKind::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

bool is_contract_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec:
    case ErrorKind::ParseError:
    case ErrorKind::DegenerateInput:
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::OutOfBox:
    case ErrorKind::SampleTooLarge:
    case ErrorKind::TooLarge:
      return false;
    default:
      return true;
  }
}

}  // namespace sahr
