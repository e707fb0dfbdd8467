#include "wgame/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "wgame/error.hpp"

namespace wgame {

BinaryMask shape_mask(const SceneShape& shape, Dims dims) {
  BinaryMask mask(dims);
  for (std::size_t r = 0; r < dims.height; ++r) {
    const double dy = static_cast<double>(r) + 0.5 - shape.center_y;
    for (std::size_t c = 0; c < dims.width; ++c) {
      const double dx = static_cast<double>(c) + 0.5 - shape.center_x;
      bool inside = false;
      if (shape.kind == ShapeKind::rectangle) {
        inside = dy >= -shape.half_height && dy < shape.half_height && dx >= -shape.half_width &&
                 dx < shape.half_width;
      } else {
        const double ny = dy / shape.half_height;
        const double nx = dx / shape.half_width;
        inside = ny * ny + nx * nx <= 1.0;
      }
      if (inside) mask.set(r, c);
    }
  }
  return mask;
}

BinaryMask scene_class_mask(const SyntheticScene& scene, std::int64_t class_id) {
  BinaryMask mask(scene.dims);
  for (const auto& shape : scene.shapes) {
    if (shape.class_id == class_id) mask |= shape_mask(shape, scene.dims);
  }
  return mask;
}

std::vector<std::int64_t> scene_classes(const SyntheticScene& scene) {
  std::set<std::int64_t> ids;
  for (const auto& shape : scene.shapes) ids.insert(shape.class_id);
  return {ids.begin(), ids.end()};
}

PolygonRing shape_polygon(const SceneShape& shape, std::size_t ellipse_vertices) {
  const double y0 = shape.center_y - shape.half_height, y1 = shape.center_y + shape.half_height;
  const double x0 = shape.center_x - shape.half_width, x1 = shape.center_x + shape.half_width;
  if (shape.kind == ShapeKind::rectangle) return {x0, y0, x1, y0, x1, y1, x0, y1};
  PolygonRing ring;
  const std::size_t n = std::max<std::size_t>(ellipse_vertices, 3);
  ring.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    ring.push_back(shape.center_x + shape.half_width * std::cos(theta));
    ring.push_back(shape.center_y + shape.half_height * std::sin(theta));
  }
  return ring;
}

SaliencyMap gaussian_saliency(Dims dims, PixelLocation center, double sigma, double amplitude) {
  if (!(sigma > 0.0) || !(amplitude > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian needs sigma > 0 and amplitude > 0");
  }
  const GaussianBlob blob{static_cast<double>(center.row) + 0.5, static_cast<double>(center.col) + 0.5,
                          sigma, sigma, amplitude};
  return gaussian_mixture(dims, std::span<const GaussianBlob>(&blob, 1));
}

SaliencyMap gaussian_mixture(Dims dims, std::span<const GaussianBlob> blobs, double floor) {
  std::vector<double> values(dims.area(), floor);
  for (const auto& blob : blobs) {
    const double ky = 1.0 / (2.0 * blob.sigma_y * blob.sigma_y);
    const double kx = 1.0 / (2.0 * blob.sigma_x * blob.sigma_x);
    std::vector<double> column_terms(dims.width);
    for (std::size_t c = 0; c < dims.width; ++c) {
      const double dx = static_cast<double>(c) + 0.5 - blob.center_x;
      column_terms[c] = std::exp(-dx * dx * kx);
    }
    for (std::size_t r = 0; r < dims.height; ++r) {
      const double dy = static_cast<double>(r) + 0.5 - blob.center_y;
      const double row_term = blob.amplitude * std::exp(-dy * dy * ky);
      for (std::size_t c = 0; c < dims.width; ++c) {
        values[r * dims.width + c] += row_term * column_terms[c];
      }
    }
  }
  return SaliencyMap(dims, std::move(values));
}

SaliencyMap equivariant_saliency(const SyntheticScene& scene, const std::optional<CropSpec>& crop,
                                 const EquivariantOptions& options) {
  if (!(options.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  Dims out = scene.dims;
  double top = 0.0, left = 0.0, scale_y = 1.0, scale_x = 1.0;
  if (crop) {
    if (!crop->fits(scene.dims)) throw Error(ErrorCode::CropOutOfBounds, "crop exceeds scene");
    out = crop->out_dims();
    top = static_cast<double>(crop->top);
    left = static_cast<double>(crop->left);
    scale_y = static_cast<double>(crop->out_height) / static_cast<double>(crop->side);
    scale_x = static_cast<double>(crop->out_width) / static_cast<double>(crop->side);
  }
  std::vector<GaussianBlob> blobs;
  for (const auto& shape : scene.shapes) {
    if (options.class_id && shape.class_id != *options.class_id) continue;
    blobs.push_back({(shape.center_y - top) * scale_y, (shape.center_x - left) * scale_x,
                     options.sigma * scale_y, options.sigma * scale_x, 1.0});
  }
  return gaussian_mixture(out, blobs);
}

SyntheticScene random_scene(RngStream rng, Dims dims, std::size_t n_shapes, std::int64_t class_count) {
  if (n_shapes == 0) throw Error(ErrorCode::InvalidArgument, "scene needs at least one shape");
  if (dims.height < 8 || dims.width < 8) {
    throw Error(ErrorCode::InvalidArgument, "scene must be at least 8x8");
  }
  if (class_count < 1) throw Error(ErrorCode::InvalidArgument, "class_count must be >= 1");
  SyntheticScene scene{dims, {}};
  const auto max_half_y = std::max<std::uint64_t>(3, dims.height / 4);
  const auto max_half_x = std::max<std::uint64_t>(3, dims.width / 4);
  while (scene.shapes.size() < n_shapes) {
    SceneShape shape;
    shape.kind = rng.uniform_int(1) == 0 ? ShapeKind::rectangle : ShapeKind::ellipse;
    shape.class_id = 1 + static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(class_count - 1)));
    const auto hh = 3 + rng.uniform_int(max_half_y - 3);
    const auto hw = 3 + rng.uniform_int(max_half_x - 3);
    shape.half_height = static_cast<double>(hh);
    shape.half_width = static_cast<double>(hw);
    shape.center_y = static_cast<double>(hh + rng.uniform_int(dims.height - 2 * hh));
    shape.center_x = static_cast<double>(hw + rng.uniform_int(dims.width - 2 * hw));
    if (shape_mask(shape, dims).count() >= 16) scene.shapes.push_back(shape);
  }
  return scene;
}

}  // namespace wgame
