#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgame {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  ParseError,
  SchemaError,
  EmptyDataset,
  RleLengthMismatch,
  RleCorrupt,
  CropOutOfBounds,
  ZeroMassSaliency,
  EmptyAggregate,
  DegenerateRanks,
  ManifestError,
  FormatError,
  NegativeValues,
  NonFiniteValues,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// batch drivers can decide between skipping a record and aborting a run.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wgame
