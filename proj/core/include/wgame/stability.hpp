#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wgame/grid.hpp"
#include "wgame/resample.hpp"

namespace wgame {

enum class StabilityProtocol { frames, crop };

std::string_view to_string(StabilityProtocol protocol) noexcept;

struct StabilityRecord {
  std::string subject_id;
  std::int64_t class_id = 0;
  StabilityProtocol protocol = StabilityProtocol::frames;
  /// Empty iff degenerate.
  std::optional<double> correlation;
  /// First frame of the pair (frames) or manifest ordinal (crop).
  std::size_t pair_index = 0;
  bool degenerate = false;
  std::string provenance;

  friend bool operator==(const StabilityRecord&, const StabilityRecord&) = default;
};

/// Spearman rank-order correlation of two equally sized maps, flattened
/// row-major. Exactly equal values share their average rank; no epsilon
/// merging of near ties. Throws DegenerateRanks when either map is constant.
double spearman(const SaliencyMap& a, const SaliencyMap& b);

/// Fractional (1-based, tie-averaged) ranks.
std::vector<double> average_ranks(std::span<const double> values);

using MapLoader = std::function<SaliencyMap(const std::filesystem::path&)>;

struct FrameSequenceManifest {
  std::string subject_id;
  std::int64_t class_id = 0;
  std::vector<std::filesystem::path> frames;
  /// Pair k compares frames[pair_starts[k]] and frames[pair_starts[k] + 1].
  std::vector<std::size_t> pair_starts;
};

/// Evenly spaced starts 0, s, 2s, ... with s = max(1, floor(frames / pairs)),
/// keeping only starts whose successor exists.
std::vector<std::size_t> default_pair_starts(std::size_t frame_count, std::size_t pairs = 5);

/// Reads {"subject_id", "class_id", "frames": [paths], "pairs": [starts]?}.
/// Relative frame paths resolve against the manifest's directory. Throws
/// ManifestError.
FrameSequenceManifest parse_frame_manifest(const std::filesystem::path& path);

void validate_frame_manifest(const FrameSequenceManifest& manifest);

struct FrameStabilityResult {
  std::vector<StabilityRecord> records;
  std::optional<double> subject_mean;
};

/// One record per selected consecutive pair; only frames that take part in
/// a pair are loaded.
FrameStabilityResult frame_stability(const FrameSequenceManifest& manifest, const MapLoader& load);

/// spearman(apply_crop(original, crop), transformed). Throws
/// DimensionMismatch when transformed is not at the crop's output size.
double crop_stability(const SaliencyMap& original, const SaliencyMap& transformed,
                      const CropSpec& crop);

struct CropManifestEntry {
  std::string id;
  std::int64_t class_id = 0;
  std::filesystem::path original;
  std::filesystem::path transformed;
  /// When absent the crop is drawn from (master seed, entry ordinal).
  std::optional<CropSpec> crop;
};

std::vector<CropManifestEntry> parse_crop_manifest(const std::filesystem::path& path);

struct CropBatchOptions {
  std::uint64_t master_seed = 0;
  double scale_min = 0.75;
  double scale_max = 0.9;
  std::size_t workers = 1;
};

struct StabilitySummary {
  std::size_t record_count = 0;  ///< non-degenerate
  std::size_t degenerate_count = 0;
  /// Pooled mean of raw correlations over every non-degenerate record.
  std::optional<double> mean_correlation;
  /// Per-subject means in first-appearance order.
  std::vector<std::pair<std::string, double>> subject_means;
};

StabilitySummary summarize_stability(std::span<const StabilityRecord> records);

struct CropBatchResult {
  std::vector<StabilityRecord> records;
  StabilitySummary summary;
};

/// Throws EmptyAggregate for an empty manifest; load errors propagate.
CropBatchResult crop_stability_batch(std::span<const CropManifestEntry> entries,
                                     const MapLoader& load, const CropBatchOptions& options = {});

}  // namespace wgame
