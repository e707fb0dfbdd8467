#pragma once

#include <cstddef>

#include "wgame/grid.hpp"

namespace wgame {

/// Side length of the square structuring element. Must be odd and >= 1.
class KernelSpec {
 public:
  static constexpr std::size_t kDefaultSize = 9;

  KernelSpec() = default;
  explicit KernelSpec(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  std::size_t radius() const noexcept { return (size_ - 1) / 2; }

 private:
  std::size_t size_ = kDefaultSize;
};

/// Binary dilation by a size x size square: a pixel is set iff some input
/// pixel within Chebyshev distance radius() is set. Nothing outside the
/// image contributes. Equivalent to thresholding conv(M, ones) > 0.
BinaryMask dilate(const BinaryMask& mask, KernelSpec kernel = {});

/// Dilation by a Euclidean disc of the given radius (pointing tolerance).
BinaryMask dilate_disc(const BinaryMask& mask, std::size_t radius);

}  // namespace wgame
