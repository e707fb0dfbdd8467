#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "wgame/coco.hpp"
#include "wgame/grid.hpp"
#include "wgame/morphology.hpp"

namespace wgame {

/// One (image, class) measurement.
struct AccuracyRecord {
  std::int64_t image_id = 0;
  std::int64_t class_id = 0;
  double weighting_accuracy = 0.0;
  bool pointing_hit = false;
  double mask_area_fraction = 0.0;
  double dilated_mask_area_fraction = 0.0;
  /// Zero-mass or constant saliency; excluded from means.
  bool degenerate = false;
  /// Free-form notes on how the inputs were prepared (source file, resizing).
  std::string provenance;

  friend bool operator==(const AccuracyRecord&, const AccuracyRecord&) = default;
};

/// Fraction of saliency mass inside the dilated mask, in [0,1].
/// Throws ZeroMassSaliency for an all-zero map, DimensionMismatch on shape mismatch.
double weighting_game(const SaliencyMap& saliency, const BinaryMask& dilated_mask);

struct PointingResult {
  bool hit = false;
  bool degenerate = false;
};

/// Hit iff the saliency argmax lies on a set pixel of the (undilated) mask.
PointingResult pointing_game(const SaliencyMap& saliency, const BinaryMask& mask);

/// Weighting Game score of uniformly distributed saliency.
double uniform_baseline(const BinaryMask& dilated_mask) noexcept;

struct EvaluationOptions {
  KernelSpec kernel{};
  /// Disc radius (px) applied to the mask for the pointing test only.
  std::size_t pointing_tolerance = 0;
};

/// mask -> dilate -> both metrics. `class_mask` is the undilated class union.
AccuracyRecord evaluate_mask(const SaliencyMap& saliency, const BinaryMask& class_mask,
                             const EvaluationOptions& options = {});

/// Rasterizes the class union, then evaluate_mask. Saliency dims must
/// match the annotated image dims.
AccuracyRecord evaluate_pair(const SaliencyMap& saliency, const ClassAnnotationSet& annotations,
                             const EvaluationOptions& options = {});

struct AccuracySummary {
  std::size_t record_count = 0;  ///< non-degenerate records
  std::size_t degenerate_count = 0;
  std::optional<double> mean_weighting;
  std::optional<double> pointing_hit_rate;
  std::optional<double> mean_uniform_baseline;
  double small_threshold = 0.10;
  std::size_t small_count = 0;
  std::optional<double> small_mean_weighting;
};

/// Means over non-degenerate records, in the given order. Never throws;
/// means are empty when no record qualifies. A record is "small" when its
/// undilated mask_area_fraction < small_threshold.
AccuracySummary summarize_accuracy(std::span<const AccuracyRecord> records,
                                   double small_threshold = 0.10);

/// summarize_accuracy, but throws EmptyAggregate without usable records.
AccuracySummary aggregate(std::span<const AccuracyRecord> records, double small_threshold = 0.10);

}  // namespace wgame
