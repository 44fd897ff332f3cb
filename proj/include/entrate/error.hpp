#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entrate {

enum class ErrorCode {
  // validation
  ShapeMismatch,
  RowNotStochastic,
  EntryOutOfRange,
  NoiseOutOfRange,
  SymbolOutOfRange,
  SchemaError,
  // numerical
  NoConvergence,
  GammaNotContractive,
  RankDeficient,
  BlockTooLarge,
  // io
  FileNotFound,
  ParseError,
};

enum class ErrorCategory { validation = 1, numerical = 2, io = 3 };

constexpr ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::GammaNotContractive:
    case ErrorCode::RankDeficient:
    case ErrorCode::BlockTooLarge:
      return ErrorCategory::numerical;
    case ErrorCode::FileNotFound:
    case ErrorCode::ParseError:
      return ErrorCategory::io;
    default:
      return ErrorCategory::validation;
  }
}

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RowNotStochastic: return "RowNotStochastic";
    case ErrorCode::EntryOutOfRange: return "EntryOutOfRange";
    case ErrorCode::NoiseOutOfRange: return "NoiseOutOfRange";
    case ErrorCode::SymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GammaNotContractive: return "GammaNotContractive";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::BlockTooLarge: return "BlockTooLarge";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Single exception type for the library; the code says what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace entrate
