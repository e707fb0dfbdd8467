#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wgame/accuracy.hpp"
#include "wgame/resample.hpp"
#include "wgame/stability.hpp"

namespace wgame {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportKind { accuracy, stability };
enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view text);

/// A run's parameters plus its records. The summary block is always derived
/// from the records when serialized and checked against them when parsed.
struct ReportDocument {
  ReportKind kind = ReportKind::accuracy;
  /// Every parameter needed to reproduce the run (object).
  nlohmann::json metadata = nlohmann::json::object();
  /// Accuracy reports only.
  double small_threshold = 0.10;
  std::vector<AccuracyRecord> accuracy_records;
  std::vector<StabilityRecord> stability_records;
};

nlohmann::json crop_to_json(const CropSpec& crop);
CropSpec crop_from_json(const nlohmann::json& j);

nlohmann::json summary_json(const ReportDocument& doc);

/// Sorted keys, two-space indentation, shortest round-trip doubles (always
/// with a fraction or exponent), trailing newline.
std::string canonical_json(const nlohmann::json& value);

std::string report_to_json(const ReportDocument& doc);
/// Header row plus one row per record; RFC 4180 quoting, CRLF line ends.
std::string report_to_csv(const ReportDocument& doc);

/// Throws FormatError when the stored summary disagrees with the records.
ReportDocument parse_report(std::string_view json_text);
ReportDocument read_report(const std::filesystem::path& path);

void write_report(const ReportDocument& doc, const std::filesystem::path& path, ReportFormat format);

/// Shortest round-trip decimal.
std::string format_double(double value);

}  // namespace wgame
