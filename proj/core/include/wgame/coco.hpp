#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wgame/grid.hpp"

namespace wgame {

/// Flat x,y vertex list in pixel coordinates (x = column axis).
using PolygonRing = std::vector<double>;

struct PolygonShape {
  std::vector<PolygonRing> rings;
};

/// Column-major run lengths, first run is background.
struct UncompressedRle {
  std::vector<std::uint32_t> counts;
};

/// COCO "counts" string encoding.
struct CompressedRle {
  std::string counts;
};

struct InstanceShape {
  std::variant<PolygonShape, UncompressedRle, CompressedRle> geometry;
  bool crowd = false;
};

/// All instances of one class in one image.
struct ClassAnnotationSet {
  std::int64_t image_id = 0;
  std::int64_t class_id = 0;
  Dims image_dims;
  std::vector<InstanceShape> instances;
};

struct AnnotationOptions {
  std::optional<std::set<std::int64_t>> category_filter;
  bool include_crowd = true;
};

/// Groups annotations of a COCO-schema document by (image_id, category_id).
/// Result is ordered by image id, then class id. Throws ParseError,
/// SchemaError, or EmptyDataset.
std::vector<ClassAnnotationSet> parse_annotations(const std::filesystem::path& path,
                                                  const AnnotationOptions& options = {});
std::vector<ClassAnnotationSet> parse_annotations_text(std::string_view json_text,
                                                       const AnnotationOptions& options = {});

/// Decodes column-major run lengths. Throws RleLengthMismatch.
BinaryMask decode_rle(std::span<const std::uint32_t> counts, Dims dims);

/// Unpacks the COCO counts string (6-bit chars offset by 48, bit 5 as the
/// continuation flag, bit 4 of the final chunk as sign, counts from index 3
/// onward stored relative to counts[i-2]). Throws RleCorrupt.
std::vector<std::uint32_t> decompress_rle_counts(std::string_view encoded);

BinaryMask decode_rle(std::string_view encoded, Dims dims);

struct RasterResult {
  BinaryMask mask;
  /// Set when a ring had fewer than three vertices or zero area.
  bool degenerate = false;
};

/// Pixel (r,c) is set iff its center (c+0.5, r+0.5) lies inside a ring
/// under the even-odd rule; rings are OR-ed. Vertices are clamped to
/// [0,width]x[0,height] first.
RasterResult rasterize_polygon(const std::vector<PolygonRing>& rings, Dims dims);

BinaryMask instance_mask(const InstanceShape& shape, Dims dims);

/// Pixel-wise OR of every instance mask at image resolution.
BinaryMask class_union_mask(const ClassAnnotationSet& set);

}  // namespace wgame
