#include "wgame/morphology.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "wgame/error.hpp"

namespace wgame {

KernelSpec::KernelSpec(std::size_t size) : size_(size) {
  if (size == 0 || size % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument,
                "kernel size must be odd and >= 1, got " + std::to_string(size));
  }
}

namespace {

// One separable pass: out[i] = any(in[i-r .. i+r]) along a line of `n`
// samples spaced `stride` apart, using a sliding count of set samples.
void dilate_line(const std::uint8_t* in, std::uint8_t* out, std::size_t n, std::size_t stride,
                 std::size_t r) {
  std::size_t window = 0;
  const std::size_t prime = std::min(n, r);
  for (std::size_t i = 0; i < prime; ++i) window += in[i * stride];
  for (std::size_t i = 0; i < n; ++i) {
    if (i + r < n) window += in[(i + r) * stride];
    if (i > r) window -= in[(i - r - 1) * stride];
    out[i * stride] = window > 0 ? 1 : 0;
  }
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, KernelSpec kernel) {
  const std::size_t r = kernel.radius();
  if (r == 0) return mask;
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();

  std::vector<std::uint8_t> src(mask.bits().begin(), mask.bits().end());
  std::vector<std::uint8_t> horizontal(src.size());
  for (std::size_t row = 0; row < h; ++row) {
    dilate_line(src.data() + row * w, horizontal.data() + row * w, w, 1, r);
  }
  std::vector<std::uint8_t> out(src.size());
  for (std::size_t col = 0; col < w; ++col) {
    dilate_line(horizontal.data() + col, out.data() + col, h, w, r);
  }
  return BinaryMask(mask.dims(), std::move(out));
}

BinaryMask dilate_disc(const BinaryMask& mask, std::size_t radius) {
  if (radius == 0) return mask;
  const auto r = static_cast<std::ptrdiff_t>(radius);
  std::vector<std::pair<std::ptrdiff_t, std::ptrdiff_t>> offsets;
  for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
    for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
      if (dy * dy + dx * dx <= r * r) offsets.emplace_back(dy, dx);
    }
  }
  const auto h = static_cast<std::ptrdiff_t>(mask.height());
  const auto w = static_cast<std::ptrdiff_t>(mask.width());
  BinaryMask out(mask.dims());
  for (std::ptrdiff_t row = 0; row < h; ++row) {
    for (std::ptrdiff_t col = 0; col < w; ++col) {
      if (!mask(row, col)) continue;
      for (auto [dy, dx] : offsets) {
        const auto y = row + dy;
        const auto x = col + dx;
        if (y >= 0 && y < h && x >= 0 && x < w) out.set(y, x);
      }
    }
  }
  return out;
}

}  // namespace wgame
