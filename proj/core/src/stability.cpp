#include "wgame/stability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "wgame/error.hpp"
#include "wgame/parallel.hpp"

namespace wgame {

using nlohmann::json;

std::string_view to_string(StabilityProtocol protocol) noexcept {
  return protocol == StabilityProtocol::frames ? "frames" : "crop";
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share the mean of ranks i+1..j.
    const double rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(const SaliencyMap& a, const SaliencyMap& b) {
  require_same_dims(a.dims(), b.dims(), "spearman");
  if (is_constant(a) || is_constant(b)) {
    throw Error(ErrorCode::DegenerateRanks, "constant map has no rank order");
  }
  const auto ra = average_ranks(a.values());
  const auto rb = average_ranks(b.values());
  // Ranks are half-integers around an exact mean of (n+1)/2, so every
  // centered product and partial sum below is exactly representable.
  const double mean = static_cast<double>(ra.size() + 1) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

std::vector<std::size_t> default_pair_starts(std::size_t frame_count, std::size_t pairs) {
  std::vector<std::size_t> starts;
  if (frame_count < 2 || pairs == 0) return starts;
  const std::size_t stride = std::max<std::size_t>(1, frame_count / pairs);
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::size_t start = k * stride;
    if (start + 1 >= frame_count) break;
    starts.push_back(start);
  }
  return starts;
}

void validate_frame_manifest(const FrameSequenceManifest& manifest) {
  if (manifest.frames.size() < 2) {
    throw Error(ErrorCode::ManifestError, "frame manifest '" + manifest.subject_id + "' needs >= 2 frames");
  }
  if (manifest.pair_starts.empty()) {
    throw Error(ErrorCode::ManifestError, "frame manifest '" + manifest.subject_id + "' selects no pairs");
  }
  for (auto start : manifest.pair_starts) {
    if (start + 1 >= manifest.frames.size()) {
      throw Error(ErrorCode::ManifestError,
                  "pair (" + std::to_string(start) + ", " + std::to_string(start + 1) +
                      ") is outside a " + std::to_string(manifest.frames.size()) + "-frame sequence");
    }
  }
}

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ManifestError, path.string() + ": " + e.what());
  }
}

std::string id_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw Error(ErrorCode::ManifestError, "identifier must be a string or an integer");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& ref) {
  const std::filesystem::path p(ref);
  return p.is_absolute() ? p : base / p;
}

CropSpec parse_crop(const json& j) {
  CropSpec crop;
  crop.top = j.at("top").get<std::size_t>();
  crop.left = j.at("left").get<std::size_t>();
  crop.side = j.at("side").get<std::size_t>();
  crop.out_height = j.at("out_h").get<std::size_t>();
  crop.out_width = j.at("out_w").get<std::size_t>();
  if (crop.side == 0 || crop.out_height == 0 || crop.out_width == 0) {
    throw Error(ErrorCode::ManifestError, "crop side and output dims must be >= 1");
  }
  return crop;
}

}  // namespace

FrameSequenceManifest parse_frame_manifest(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  const auto base = path.parent_path();
  FrameSequenceManifest manifest;
  try {
    manifest.subject_id = id_string(doc.at("subject_id"));
    manifest.class_id = doc.at("class_id").get<std::int64_t>();
    for (const auto& f : doc.at("frames")) manifest.frames.push_back(resolve(base, f.get<std::string>()));
    if (doc.contains("pairs")) {
      for (const auto& p : doc.at("pairs")) manifest.pair_starts.push_back(p.get<std::size_t>());
    } else {
      manifest.pair_starts = default_pair_starts(manifest.frames.size());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ManifestError, path.string() + ": " + e.what());
  }
  validate_frame_manifest(manifest);
  return manifest;
}

FrameStabilityResult frame_stability(const FrameSequenceManifest& manifest, const MapLoader& load) {
  validate_frame_manifest(manifest);
  FrameStabilityResult result;
  std::vector<std::optional<SaliencyMap>> cache(manifest.frames.size());
  auto frame = [&](std::size_t i) -> const SaliencyMap& {
    if (!cache[i]) cache[i] = load(manifest.frames[i]);
    return *cache[i];
  };

  for (auto start : manifest.pair_starts) {
    StabilityRecord record;
    record.subject_id = manifest.subject_id;
    record.class_id = manifest.class_id;
    record.protocol = StabilityProtocol::frames;
    record.pair_index = start;
    record.provenance = "pair=(" + std::to_string(start) + "," + std::to_string(start + 1) + ")";
    const SaliencyMap& a = frame(start);
    const SaliencyMap& b = frame(start + 1);
    if (a.dims() != b.dims()) {
      throw Error(ErrorCode::ManifestError, "frames of '" + manifest.subject_id + "' differ in size");
    }
    try {
      record.correlation = spearman(a, b);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRanks) throw;
      record.degenerate = true;
    }
    result.records.push_back(std::move(record));
  }
  result.subject_mean = summarize_stability(result.records).mean_correlation;
  return result;
}

double crop_stability(const SaliencyMap& original, const SaliencyMap& transformed,
                      const CropSpec& crop) {
  require_same_dims(transformed.dims(), crop.out_dims(), "crop_stability");
  return spearman(apply_crop(original, crop), transformed);
}

std::vector<CropManifestEntry> parse_crop_manifest(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  const auto base = path.parent_path();
  std::vector<CropManifestEntry> entries;
  try {
    for (const auto& e : doc.at("entries")) {
      CropManifestEntry entry;
      entry.id = id_string(e.at("id"));
      entry.class_id = e.value("class_id", std::int64_t{0});
      entry.original = resolve(base, e.at("original").get<std::string>());
      entry.transformed = resolve(base, e.at("transformed").get<std::string>());
      if (e.contains("crop") && !e.at("crop").is_null()) entry.crop = parse_crop(e.at("crop"));
      entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ManifestError, path.string() + ": " + e.what());
  }
  return entries;
}

StabilitySummary summarize_stability(std::span<const StabilityRecord> records) {
  StabilitySummary summary;
  std::vector<double> pooled;
  std::vector<std::pair<std::string, std::vector<double>>> per_subject;
  for (const auto& record : records) {
    if (record.degenerate || !record.correlation) {
      ++summary.degenerate_count;
      continue;
    }
    pooled.push_back(*record.correlation);
    auto it = std::find_if(per_subject.begin(), per_subject.end(),
                           [&](const auto& s) { return s.first == record.subject_id; });
    if (it == per_subject.end()) {
      per_subject.emplace_back(record.subject_id, std::vector<double>{});
      it = std::prev(per_subject.end());
    }
    it->second.push_back(*record.correlation);
  }
  summary.record_count = pooled.size();
  if (!pooled.empty()) {
    summary.mean_correlation = compensated_sum(pooled) / static_cast<double>(pooled.size());
  }
  for (const auto& [subject, values] : per_subject) {
    summary.subject_means.emplace_back(subject,
                                       compensated_sum(values) / static_cast<double>(values.size()));
  }
  return summary;
}

CropBatchResult crop_stability_batch(std::span<const CropManifestEntry> entries,
                                     const MapLoader& load, const CropBatchOptions& options) {
  if (entries.empty()) throw Error(ErrorCode::EmptyAggregate, "crop manifest has no entries");
  CropBatchResult result;
  result.records.resize(entries.size());
  parallel_for(entries.size(), options.workers, [&](std::size_t i) {
    const auto& entry = entries[i];
    const SaliencyMap original = load(entry.original);
    const SaliencyMap transformed = load(entry.transformed);
    const CropSpec crop = entry.crop ? *entry.crop
                                     : sample_crop(RngStream(options.master_seed, i), original.dims(),
                                                   options.scale_min, options.scale_max);
    StabilityRecord& record = result.records[i];
    record.subject_id = entry.id;
    record.class_id = entry.class_id;
    record.protocol = StabilityProtocol::crop;
    record.pair_index = i;
    record.provenance = "crop=" + std::to_string(crop.top) + "," + std::to_string(crop.left) + "," +
                        std::to_string(crop.side) + (entry.crop ? "" : " (sampled)");
    try {
      record.correlation = crop_stability(original, transformed, crop);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRanks) throw;
      record.degenerate = true;
    }
  });
  result.summary = summarize_stability(result.records);
  return result;
}

}  // namespace wgame
