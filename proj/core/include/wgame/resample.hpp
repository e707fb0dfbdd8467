#pragma once

#include <cstddef>
#include <vector>

#include "wgame/grid.hpp"
#include "wgame/rng.hpp"

namespace wgame {

/// Square window [top, top+side) x [left, left+side), resized to out dims.
struct CropSpec {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t side = 1;
  std::size_t out_height = 1;
  std::size_t out_width = 1;

  Dims out_dims() const noexcept { return {out_height, out_width}; }
  bool fits(Dims source) const noexcept {
    return side >= 1 && top + side <= source.height && left + side <= source.width;
  }
  friend bool operator==(const CropSpec&, const CropSpec&) = default;
};

/// Half-pixel-center bilinear resampling: output pixel (r,c) samples source
/// coordinate ((r+0.5)*H/H' - 0.5, (c+0.5)*W/W' - 0.5), clamped to the
/// border. Output values never leave [min(input), max(input)].
SaliencyMap bilinear_resize(const SaliencyMap& map, Dims out);

/// Copies the side x side window without resampling.
SaliencyMap extract_window(const SaliencyMap& map, std::size_t top, std::size_t left,
                           std::size_t side);

/// Window extraction followed by bilinear_resize. Throws CropOutOfBounds.
SaliencyMap apply_crop(const SaliencyMap& map, const CropSpec& crop);

/// Random resized crop with 1:1 aspect. Draw order: area fraction s in
/// [scale_min, scale_max], then top, then left. side = round(sqrt(s*H*W))
/// clamped to [1, min(H,W)]; output dims equal the source dims.
CropSpec sample_crop(RngStream rng, Dims source, double scale_min, double scale_max);

/// Planar zoom-in/zoom-out sequence of centered square crops. The zoom
/// factor rises linearly from 1 at frame 0 to max_zoom at frame ceil(n/2)
/// and falls back symmetrically, so side[i] == side[(n - i) % n] for even n.
std::vector<CropSpec> synthesize_zoom_sequence(Dims image, std::size_t frames = 150,
                                               double max_zoom = 1.5);

}  // namespace wgame
