#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wgame/grid.hpp"

namespace wgame {

/// How signed saliency values are made non-negative on ingestion.
enum class NegativePolicy { error, clamp_to_zero, absolute_value };

std::string_view to_string(NegativePolicy policy) noexcept;
/// Accepts "error", "clamp" / "clamp_to_zero", "abs" / "absolute_value".
NegativePolicy parse_negative_policy(std::string_view text);

/// Applies the policy and validates. Throws NonFiniteValues, or
/// NegativeValues under NegativePolicy::error.
SaliencyMap make_saliency(Dims dims, std::vector<double> values, NegativePolicy policy);

// SMAP v1: "SMAP", version byte 1, u32le height, u32le width, then
// height*width f32le values in row-major order.
inline constexpr std::size_t kSmapHeaderSize = 13;

std::vector<std::uint8_t> encode_smap(const SaliencyMap& map);
SaliencyMap decode_smap(std::span<const std::uint8_t> bytes,
                        NegativePolicy policy = NegativePolicy::error);

/// Values are stored as float32.
void write_saliency(const SaliencyMap& map, const std::filesystem::path& path);

/// SMAP (by magic) or 8/16-bit grayscale PNG mapped linearly onto [0,1].
SaliencyMap read_saliency(const std::filesystem::path& path,
                          NegativePolicy policy = NegativePolicy::error);

/// Interleaved 8- or 16-bit samples.
struct RasterImage {
  Dims dims;
  std::size_t channels = 1;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;
};

/// Reads any PNG, expanding palettes; alpha is dropped.
RasterImage read_png(const std::filesystem::path& path);
void write_png(const RasterImage& image, const std::filesystem::path& path);

/// 8-bit grayscale: nonzero pixels are foreground.
BinaryMask read_mask_png(const std::filesystem::path& path);
/// Writes 0 / 255.
void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path);

/// Scales to [0, 65535] by the map's maximum and writes 16-bit grayscale.
void write_saliency_png(const SaliencyMap& map, const std::filesystem::path& path);

}  // namespace wgame
