#include "wgame/error.hpp"

namespace wgame {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::RleLengthMismatch: return "RleLengthMismatch";
    case ErrorCode::RleCorrupt: return "RleCorrupt";
    case ErrorCode::CropOutOfBounds: return "CropOutOfBounds";
    case ErrorCode::ZeroMassSaliency: return "ZeroMassSaliency";
    case ErrorCode::EmptyAggregate: return "EmptyAggregate";
    case ErrorCode::DegenerateRanks: return "DegenerateRanks";
    case ErrorCode::ManifestError: return "ManifestError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::NegativeValues: return "NegativeValues";
    case ErrorCode::NonFiniteValues: return "NonFiniteValues";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace wgame
