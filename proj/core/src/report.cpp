#include "wgame/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wgame/error.hpp"

namespace wgame {

using nlohmann::json;

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw Error(ErrorCode::InvalidArgument, "unknown report format '" + std::string(text) + "'");
}

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

json crop_to_json(const CropSpec& crop) {
  return {{"top", crop.top},       {"left", crop.left},      {"side", crop.side},
          {"out_h", crop.out_height}, {"out_w", crop.out_width}};
}

CropSpec crop_from_json(const json& j) {
  try {
    CropSpec crop{j.at("top").get<std::size_t>(), j.at("left").get<std::size_t>(),
                  j.at("side").get<std::size_t>(), j.at("out_h").get<std::size_t>(),
                  j.at("out_w").get<std::size_t>()};
    if (crop.side == 0 || crop.out_height == 0 || crop.out_width == 0) {
      throw Error(ErrorCode::FormatError, "crop side and output dims must be >= 1");
    }
    return crop;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("bad crop object: ") + e.what());
  }
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

std::string_view kind_name(ReportKind kind) {
  return kind == ReportKind::accuracy ? "accuracy" : "stability";
}

json accuracy_record_json(const AccuracyRecord& r) {
  return {{"image_id", r.image_id},
          {"class_id", r.class_id},
          {"weighting_accuracy", r.weighting_accuracy},
          {"pointing_hit", r.pointing_hit},
          {"mask_area_fraction", r.mask_area_fraction},
          {"dilated_mask_area_fraction", r.dilated_mask_area_fraction},
          {"degenerate", r.degenerate},
          {"provenance", r.provenance}};
}

AccuracyRecord accuracy_record_from(const json& j) {
  AccuracyRecord r;
  r.image_id = j.at("image_id").get<std::int64_t>();
  r.class_id = j.at("class_id").get<std::int64_t>();
  r.weighting_accuracy = j.at("weighting_accuracy").get<double>();
  r.pointing_hit = j.at("pointing_hit").get<bool>();
  r.mask_area_fraction = j.at("mask_area_fraction").get<double>();
  r.dilated_mask_area_fraction = j.at("dilated_mask_area_fraction").get<double>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.provenance = j.at("provenance").get<std::string>();
  return r;
}

json stability_record_json(const StabilityRecord& r) {
  return {{"subject_id", r.subject_id},
          {"class_id", r.class_id},
          {"protocol", std::string(to_string(r.protocol))},
          {"correlation", optional_number(r.correlation)},
          {"pair_index", r.pair_index},
          {"degenerate", r.degenerate},
          {"provenance", r.provenance}};
}

StabilityRecord stability_record_from(const json& j) {
  StabilityRecord r;
  r.subject_id = j.at("subject_id").get<std::string>();
  r.class_id = j.at("class_id").get<std::int64_t>();
  const auto protocol = j.at("protocol").get<std::string>();
  if (protocol != "frames" && protocol != "crop") {
    throw Error(ErrorCode::FormatError, "unknown stability protocol '" + protocol + "'");
  }
  r.protocol = protocol == "frames" ? StabilityProtocol::frames : StabilityProtocol::crop;
  r.correlation = read_optional(j.at("correlation"));
  r.pair_index = j.at("pair_index").get<std::size_t>();
  r.degenerate = j.at("degenerate").get<bool>();
  r.provenance = j.at("provenance").get<std::string>();
  return r;
}

void dump_canonical(const json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {  // std::map keeps keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        dump_canonical(item, out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_canonical(v[i], out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      std::string text = format_double(d);
      if (text.find_first_of(".e") == std::string::npos) text += ".0";
      out += text;
      return;
    }
    default:
      out += v.dump();
  }
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

json summary_json(const ReportDocument& doc) {
  if (doc.kind == ReportKind::accuracy) {
    const auto s = summarize_accuracy(doc.accuracy_records, doc.small_threshold);
    return {{"record_count", s.record_count},
            {"degenerate_count", s.degenerate_count},
            {"mean_weighting", optional_number(s.mean_weighting)},
            {"pointing_hit_rate", optional_number(s.pointing_hit_rate)},
            {"mean_uniform_baseline", optional_number(s.mean_uniform_baseline)},
            {"small_threshold", s.small_threshold},
            {"small_count", s.small_count},
            {"small_mean_weighting", optional_number(s.small_mean_weighting)}};
  }
  const auto s = summarize_stability(doc.stability_records);
  json subjects = json::array();
  for (const auto& [subject, mean] : s.subject_means) {
    subjects.push_back({{"subject_id", subject}, {"mean_correlation", mean}});
  }
  return {{"record_count", s.record_count},
          {"degenerate_count", s.degenerate_count},
          {"mean_correlation", optional_number(s.mean_correlation)},
          {"subject_means", subjects}};
}

std::string canonical_json(const json& value) {
  std::string out;
  dump_canonical(value, out, 0);
  out += "\n";
  return out;
}

std::string report_to_json(const ReportDocument& doc) {
  json records = json::array();
  if (doc.kind == ReportKind::accuracy) {
    for (const auto& r : doc.accuracy_records) records.push_back(accuracy_record_json(r));
  } else {
    for (const auto& r : doc.stability_records) records.push_back(stability_record_json(r));
  }
  const json root = {{"format", "wgame-report"},
                     {"schema_version", kReportSchemaVersion},
                     {"kind", std::string(kind_name(doc.kind))},
                     {"metadata", doc.metadata.is_null() ? json::object() : doc.metadata},
                     {"records", records},
                     {"summary", summary_json(doc)}};
  return canonical_json(root);
}

std::string report_to_csv(const ReportDocument& doc) {
  std::ostringstream out;
  const auto flag = [](bool b) { return b ? "true" : "false"; };
  if (doc.kind == ReportKind::accuracy) {
    out << "image_id,class_id,weighting_accuracy,pointing_hit,mask_area_fraction,"
           "dilated_mask_area_fraction,degenerate,provenance\r\n";
    for (const auto& r : doc.accuracy_records) {
      out << r.image_id << ',' << r.class_id << ',' << format_double(r.weighting_accuracy) << ','
          << flag(r.pointing_hit) << ',' << format_double(r.mask_area_fraction) << ','
          << format_double(r.dilated_mask_area_fraction) << ',' << flag(r.degenerate) << ','
          << csv_field(r.provenance) << "\r\n";
    }
  } else {
    out << "subject_id,class_id,protocol,pair_index,correlation,degenerate,provenance\r\n";
    for (const auto& r : doc.stability_records) {
      out << csv_field(r.subject_id) << ',' << r.class_id << ',' << to_string(r.protocol) << ','
          << r.pair_index << ',' << (r.correlation ? format_double(*r.correlation) : "") << ','
          << flag(r.degenerate) << ',' << csv_field(r.provenance) << "\r\n";
    }
  }
  return out.str();
}

ReportDocument parse_report(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::FormatError, e.what());
  }
  ReportDocument doc;
  try {
    if (root.at("format") != "wgame-report") throw Error(ErrorCode::FormatError, "not a wgame report");
    if (root.at("schema_version") != kReportSchemaVersion) {
      throw Error(ErrorCode::FormatError, "unsupported report schema version");
    }
    const auto kind = root.at("kind").get<std::string>();
    if (kind != "accuracy" && kind != "stability") {
      throw Error(ErrorCode::FormatError, "unknown report kind '" + kind + "'");
    }
    doc.kind = kind == "accuracy" ? ReportKind::accuracy : ReportKind::stability;
    doc.metadata = root.at("metadata");
    const json& summary = root.at("summary");
    if (doc.kind == ReportKind::accuracy) {
      doc.small_threshold = summary.at("small_threshold").get<double>();
      for (const auto& r : root.at("records")) doc.accuracy_records.push_back(accuracy_record_from(r));
    } else {
      for (const auto& r : root.at("records")) doc.stability_records.push_back(stability_record_from(r));
    }
    if (summary_json(doc) != summary) {
      throw Error(ErrorCode::FormatError, "report summary does not match its records");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, e.what());
  }
  return doc;
}

ReportDocument read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_report(buffer.str());
}

void write_report(const ReportDocument& doc, const std::filesystem::path& path, ReportFormat format) {
  const std::string text = format == ReportFormat::json ? report_to_json(doc) : report_to_csv(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace wgame
