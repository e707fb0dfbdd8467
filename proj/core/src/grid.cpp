#include "wgame/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgame/error.hpp"

namespace wgame {

namespace {

void require_nonempty(Dims dims, const char* what) {
  if (dims.height == 0 || dims.width == 0) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must have height and width >= 1");
  }
}

std::string dims_string(Dims d) {
  return std::to_string(d.height) + "x" + std::to_string(d.width);
}

}  // namespace

void require_same_dims(Dims a, Dims b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + dims_string(a) + " vs " + dims_string(b));
  }
}

SaliencyMap::SaliencyMap(Dims dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
  require_nonempty(dims_, "saliency map");
  if (values_.size() != dims_.area()) {
    throw Error(ErrorCode::DimensionMismatch,
                "saliency payload has " + std::to_string(values_.size()) + " values, expected " +
                    std::to_string(dims_.area()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValues, "saliency map contains NaN/Inf");
    if (v < 0.0) throw Error(ErrorCode::NegativeValues, "saliency map contains negative values");
  }
}

SaliencyMap::SaliencyMap(Dims dims, double fill)
    : SaliencyMap(dims, std::vector<double>(dims.area(), fill)) {}

BinaryMask::BinaryMask(Dims dims, bool fill) : dims_(dims), bits_(dims.area(), fill ? 1 : 0) {}

BinaryMask::BinaryMask(Dims dims, std::vector<std::uint8_t> bits) : dims_(dims), bits_(std::move(bits)) {
  if (bits_.size() != dims_.area()) {
    throw Error(ErrorCode::DimensionMismatch, "mask payload does not match " + dims_string(dims_));
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::operator~() const {
  BinaryMask out = *this;
  for (auto& b : out.bits_) b ^= 1;
  return out;
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
  require_same_dims(dims_, other.dims_, "mask union");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

BinaryMask& BinaryMask::operator&=(const BinaryMask& other) {
  require_same_dims(dims_, other.dims_, "mask intersection");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
  return *this;
}

bool BinaryMask::is_subset_of(const BinaryMask& other) const {
  require_same_dims(dims_, other.dims_, "mask subset");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

double compensated_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double total_mass(const SaliencyMap& map) noexcept { return compensated_sum(map.values()); }

double masked_mass(const SaliencyMap& map, const BinaryMask& mask) {
  require_same_dims(map.dims(), mask.dims(), "masked_mass");
  const auto values = map.values();
  double sum = 0.0;
  double compensation = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask.at_index(i)) continue;
    const double v = values[i];
    const double t = sum + v;
    compensation += (sum >= v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + compensation;
}

ArgmaxResult argmax_location(const SaliencyMap& map) noexcept {
  const auto values = map.values();
  std::size_t best = 0;
  bool constant = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] != values[0]) constant = false;
    if (values[i] > values[best]) best = i;
  }
  return {{best / map.width(), best % map.width()}, constant};
}

double area_fraction(const BinaryMask& mask) noexcept {
  if (mask.size() == 0) return 0.0;
  return static_cast<double>(mask.count()) / static_cast<double>(mask.size());
}

bool is_constant(const SaliencyMap& map) noexcept {
  const auto values = map.values();
  return std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
}

}  // namespace wgame
