#pragma once

#include <stdexcept>
#include <string>

namespace herdisc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct DimError : Error { using Error::Error; };
struct RankError : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct OracleTooLarge : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct RationalizationError : Error { using Error::Error; };
struct InvalidSubset : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Raised when a CSV cell fails to parse; carries the 1-based location.
struct ParseError : Error {
  int row, col;
  ParseError(const std::string& msg, int row_, int col_)
      : Error(msg), row(row_), col(col_) {}
};

// Raised when a subset-selection contract cannot be met; carries the
// best sigma_min actually achieved so the failure is inspectable.
struct ContractError : Error {
  double achieved_sigma_min;
  ContractError(const std::string& msg, double achieved)
      : Error(msg), achieved_sigma_min(achieved) {}
};

}  // namespace herdisc
