#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wgame/coco.hpp"
#include "wgame/grid.hpp"
#include "wgame/resample.hpp"
#include "wgame/rng.hpp"

namespace wgame {

// Geometry here uses continuous image coordinates: pixel (r, c) covers
// [r, r+1) x [c, c+1) and its center sits at (r+0.5, c+0.5).

enum class ShapeKind { rectangle, ellipse };

struct SceneShape {
  ShapeKind kind = ShapeKind::rectangle;
  std::int64_t class_id = 1;
  double center_y = 0.0;
  double center_x = 0.0;
  double half_height = 1.0;
  double half_width = 1.0;
};

struct SyntheticScene {
  Dims dims;
  std::vector<SceneShape> shapes;
};

/// Closed-form rasterization at pixel centers.
BinaryMask shape_mask(const SceneShape& shape, Dims dims);
/// Union of all shapes with the given class id.
BinaryMask scene_class_mask(const SyntheticScene& scene, std::int64_t class_id);
/// Sorted, de-duplicated class ids present in the scene.
std::vector<std::int64_t> scene_classes(const SyntheticScene& scene);

/// Ring approximating the shape outline (4 vertices for rectangles).
PolygonRing shape_polygon(const SceneShape& shape, std::size_t ellipse_vertices = 48);

struct GaussianBlob {
  double center_y = 0.0;
  double center_x = 0.0;
  double sigma_y = 1.0;
  double sigma_x = 1.0;
  double amplitude = 1.0;
};

/// amplitude * exp(-((r-cr)^2 + (c-cc)^2) / (2 sigma^2)) in pixel-index units.
SaliencyMap gaussian_saliency(Dims dims, PixelLocation center, double sigma, double amplitude = 1.0);

/// Sum of blobs (continuous coordinates) plus a constant floor.
SaliencyMap gaussian_mixture(Dims dims, std::span<const GaussianBlob> blobs, double floor = 0.0);

struct EquivariantOptions {
  double sigma = 8.0;
  /// Restrict blobs to shapes of one class (class-guided explainer).
  std::optional<std::int64_t> class_id;
};

/// Ideal stable explainer: one Gaussian per shape centroid, rendered in the
/// frame of `crop` (if any) at the crop's output resolution, with sigma
/// scaled by the crop's zoom.
SaliencyMap equivariant_saliency(const SyntheticScene& scene, const std::optional<CropSpec>& crop,
                                 const EquivariantOptions& options = {});

/// Deterministic scene of n_shapes rectangles/ellipses inside the image,
/// each covering >= 16 pixels. Class ids are drawn from 1..class_count.
SyntheticScene random_scene(RngStream rng, Dims dims, std::size_t n_shapes,
                            std::int64_t class_count = 5);

}  // namespace wgame
