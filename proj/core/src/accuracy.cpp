#include "wgame/accuracy.hpp"

#include <algorithm>
#include <vector>

#include "wgame/error.hpp"

namespace wgame {

double weighting_game(const SaliencyMap& saliency, const BinaryMask& dilated_mask) {
  require_same_dims(saliency.dims(), dilated_mask.dims(), "weighting_game");
  const double total = total_mass(saliency);
  if (total <= 0.0) throw Error(ErrorCode::ZeroMassSaliency, "saliency map has zero mass");
  return std::clamp(masked_mass(saliency, dilated_mask) / total, 0.0, 1.0);
}

PointingResult pointing_game(const SaliencyMap& saliency, const BinaryMask& mask) {
  require_same_dims(saliency.dims(), mask.dims(), "pointing_game");
  const ArgmaxResult peak = argmax_location(saliency);
  return {mask(peak.location.row, peak.location.col), peak.degenerate};
}

double uniform_baseline(const BinaryMask& dilated_mask) noexcept {
  return area_fraction(dilated_mask);
}

AccuracyRecord evaluate_mask(const SaliencyMap& saliency, const BinaryMask& class_mask,
                             const EvaluationOptions& options) {
  require_same_dims(saliency.dims(), class_mask.dims(), "evaluate_mask");
  AccuracyRecord record;
  const BinaryMask dilated = dilate(class_mask, options.kernel);
  record.mask_area_fraction = area_fraction(class_mask);
  record.dilated_mask_area_fraction = area_fraction(dilated);

  const double total = total_mass(saliency);
  if (total > 0.0) {
    record.weighting_accuracy = weighting_game(saliency, dilated);
  } else {
    record.degenerate = true;
  }

  const PointingResult pointing =
      options.pointing_tolerance > 0
          ? pointing_game(saliency, dilate_disc(class_mask, options.pointing_tolerance))
          : pointing_game(saliency, class_mask);
  record.pointing_hit = pointing.hit;
  record.degenerate = record.degenerate || pointing.degenerate;
  return record;
}

AccuracyRecord evaluate_pair(const SaliencyMap& saliency, const ClassAnnotationSet& annotations,
                             const EvaluationOptions& options) {
  require_same_dims(saliency.dims(), annotations.image_dims, "evaluate_pair");
  AccuracyRecord record = evaluate_mask(saliency, class_union_mask(annotations), options);
  record.image_id = annotations.image_id;
  record.class_id = annotations.class_id;
  return record;
}

AccuracySummary summarize_accuracy(std::span<const AccuracyRecord> records, double small_threshold) {
  AccuracySummary summary;
  summary.small_threshold = small_threshold;
  std::vector<double> weighting, baseline, hits, small;
  for (const auto& record : records) {
    if (record.degenerate) {
      ++summary.degenerate_count;
      continue;
    }
    weighting.push_back(record.weighting_accuracy);
    baseline.push_back(record.dilated_mask_area_fraction);
    hits.push_back(record.pointing_hit ? 1.0 : 0.0);
    if (record.mask_area_fraction < small_threshold) small.push_back(record.weighting_accuracy);
  }
  summary.record_count = weighting.size();
  summary.small_count = small.size();
  const auto mean = [](const std::vector<double>& v) -> std::optional<double> {
    if (v.empty()) return std::nullopt;
    return compensated_sum(v) / static_cast<double>(v.size());
  };
  summary.mean_weighting = mean(weighting);
  summary.pointing_hit_rate = mean(hits);
  summary.mean_uniform_baseline = mean(baseline);
  summary.small_mean_weighting = mean(small);
  return summary;
}

AccuracySummary aggregate(std::span<const AccuracyRecord> records, double small_threshold) {
  AccuracySummary summary = summarize_accuracy(records, small_threshold);
  if (summary.record_count == 0) {
    throw Error(ErrorCode::EmptyAggregate, "no non-degenerate accuracy records to aggregate");
  }
  return summary;
}

}  // namespace wgame
