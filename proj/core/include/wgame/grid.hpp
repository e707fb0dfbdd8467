#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wgame {

struct Dims {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t area() const noexcept { return height * width; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct PixelLocation {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const PixelLocation&, const PixelLocation&) = default;
};

/// Row-major grid of finite, non-negative saliency magnitudes.
///
/// Construction validates every value; once built a map is immutable.
/// Signed inputs must go through a NegativePolicy at ingestion (see image_io.hpp).
class SaliencyMap {
 public:
  SaliencyMap(Dims dims, std::vector<double> values);
  /// Constant-valued map.
  SaliencyMap(Dims dims, double fill);

  Dims dims() const noexcept { return dims_; }
  std::size_t height() const noexcept { return dims_.height; }
  std::size_t width() const noexcept { return dims_.width; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    return values_[row * dims_.width + col];
  }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const SaliencyMap&, const SaliencyMap&) = default;

 private:
  Dims dims_;
  std::vector<double> values_;
};

/// Row-major boolean grid (class mask M or dilated mask D).
class BinaryMask {
 public:
  BinaryMask() = default;
  explicit BinaryMask(Dims dims, bool fill = false);
  BinaryMask(Dims dims, std::vector<std::uint8_t> bits);

  Dims dims() const noexcept { return dims_; }
  std::size_t height() const noexcept { return dims_.height; }
  std::size_t width() const noexcept { return dims_.width; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool operator()(std::size_t row, std::size_t col) const noexcept {
    return bits_[row * dims_.width + col] != 0;
  }
  void set(std::size_t row, std::size_t col, bool value = true) noexcept {
    bits_[row * dims_.width + col] = value ? 1 : 0;
  }
  bool at_index(std::size_t index) const noexcept { return bits_[index] != 0; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t count() const noexcept;

  BinaryMask operator~() const;
  BinaryMask& operator|=(const BinaryMask& other);
  BinaryMask& operator&=(const BinaryMask& other);
  friend BinaryMask operator|(BinaryMask a, const BinaryMask& b) { return a |= b; }
  friend BinaryMask operator&(BinaryMask a, const BinaryMask& b) { return a &= b; }

  /// True when every set pixel of *this is also set in `other`.
  bool is_subset_of(const BinaryMask& other) const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  Dims dims_;
  std::vector<std::uint8_t> bits_;
};

struct ArgmaxResult {
  PixelLocation location;
  /// All values equal; location falls back to (0,0).
  bool degenerate = false;
};

/// Neumaier-compensated sum, independent of grid size.
double compensated_sum(std::span<const double> values) noexcept;

double total_mass(const SaliencyMap& map) noexcept;

/// Sum of values under set mask pixels. Throws DimensionMismatch.
double masked_mass(const SaliencyMap& map, const BinaryMask& mask);

/// Location of the maximum; ties resolve to the smallest row-major index.
ArgmaxResult argmax_location(const SaliencyMap& map) noexcept;

double area_fraction(const BinaryMask& mask) noexcept;

bool is_constant(const SaliencyMap& map) noexcept;

void require_same_dims(Dims a, Dims b, const char* what);

}  // namespace wgame
