#include "wgame/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgame/error.hpp"

namespace wgame {

namespace {

struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

// Per-axis sample positions; shared by all rows (or columns).
std::vector<Tap> axis_taps(std::size_t in, std::size_t out) {
  std::vector<Tap> taps(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  const double last = static_cast<double>(in - 1);
  for (std::size_t i = 0; i < out; ++i) {
    const double src = std::clamp((static_cast<double>(i) + 0.5) * scale - 0.5, 0.0, last);
    const double base = std::floor(src);
    const auto lo = static_cast<std::size_t>(base);
    taps[i] = {lo, std::min(lo + 1, in - 1), src - base};
  }
  return taps;
}

}  // namespace

SaliencyMap bilinear_resize(const SaliencyMap& map, Dims out) {
  if (out.height == 0 || out.width == 0) {
    throw Error(ErrorCode::InvalidArgument, "resize target must be at least 1x1");
  }
  if (out == map.dims()) return map;

  const auto rows = axis_taps(map.height(), out.height);
  const auto cols = axis_taps(map.width(), out.width);
  std::vector<double> values(out.area());
  for (std::size_t r = 0; r < out.height; ++r) {
    const Tap& ty = rows[r];
    for (std::size_t c = 0; c < out.width; ++c) {
      const Tap& tx = cols[c];
      // std::lerp is exact at equal endpoints and bounded, so constants
      // survive untouched and outputs stay inside the input range.
      const double top = std::lerp(map(ty.lo, tx.lo), map(ty.lo, tx.hi), tx.frac);
      const double bottom = std::lerp(map(ty.hi, tx.lo), map(ty.hi, tx.hi), tx.frac);
      values[r * out.width + c] = std::lerp(top, bottom, ty.frac);
    }
  }
  return SaliencyMap(out, std::move(values));
}

SaliencyMap extract_window(const SaliencyMap& map, std::size_t top, std::size_t left,
                           std::size_t side) {
  if (side == 0 || top + side > map.height() || left + side > map.width()) {
    throw Error(ErrorCode::CropOutOfBounds, "window exceeds the source map");
  }
  std::vector<double> values;
  values.reserve(side * side);
  for (std::size_t r = top; r < top + side; ++r) {
    const auto row = map.values().subspan(r * map.width() + left, side);
    values.insert(values.end(), row.begin(), row.end());
  }
  return SaliencyMap({side, side}, std::move(values));
}

SaliencyMap apply_crop(const SaliencyMap& map, const CropSpec& crop) {
  if (!crop.fits(map.dims())) {
    throw Error(ErrorCode::CropOutOfBounds,
                "crop (top=" + std::to_string(crop.top) + ", left=" + std::to_string(crop.left) +
                    ", side=" + std::to_string(crop.side) + ") exceeds " +
                    std::to_string(map.height()) + "x" + std::to_string(map.width()));
  }
  if (crop.top == 0 && crop.left == 0 && crop.side == map.height() && crop.side == map.width() &&
      crop.out_dims() == map.dims()) {
    return map;
  }
  return bilinear_resize(extract_window(map, crop.top, crop.left, crop.side), crop.out_dims());
}

CropSpec sample_crop(RngStream rng, Dims source, double scale_min, double scale_max) {
  if (!(scale_min > 0.0 && scale_min <= scale_max && scale_max <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "crop scale bounds must satisfy 0 < min <= max <= 1");
  }
  if (source.area() == 0) throw Error(ErrorCode::InvalidArgument, "empty source image");
  const double s = rng.uniform_real(scale_min, scale_max);
  const double area = s * static_cast<double>(source.height) * static_cast<double>(source.width);
  const auto max_side = std::min(source.height, source.width);
  const auto side =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(std::sqrt(area))), 1, max_side);
  CropSpec crop;
  crop.side = side;
  crop.top = static_cast<std::size_t>(rng.uniform_int(source.height - side));
  crop.left = static_cast<std::size_t>(rng.uniform_int(source.width - side));
  crop.out_height = source.height;
  crop.out_width = source.width;
  return crop;
}

std::vector<CropSpec> synthesize_zoom_sequence(Dims image, std::size_t frames, double max_zoom) {
  if (frames < 2) throw Error(ErrorCode::InvalidArgument, "zoom sequence needs >= 2 frames");
  if (!(max_zoom > 1.0)) throw Error(ErrorCode::InvalidArgument, "max_zoom must exceed 1");
  if (image.area() == 0) throw Error(ErrorCode::InvalidArgument, "empty source image");

  const std::size_t apex = (frames + 1) / 2;
  const auto base = static_cast<double>(std::min(image.height, image.width));
  std::vector<CropSpec> out;
  out.reserve(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t step = i <= apex ? i : 2 * apex - i;
    const double zoom = 1.0 + (max_zoom - 1.0) * static_cast<double>(step) / static_cast<double>(apex);
    const auto side = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(base / zoom)), 1,
                                              static_cast<std::size_t>(base));
    CropSpec crop;
    crop.side = side;
    crop.top = (image.height - side) / 2;
    crop.left = (image.width - side) / 2;
    crop.out_height = image.height;
    crop.out_width = image.width;
    out.push_back(crop);
  }
  return out;
}

}  // namespace wgame
