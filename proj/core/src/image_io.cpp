#include "wgame/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <png.h>

#include "wgame/error.hpp"

namespace wgame {

std::string_view to_string(NegativePolicy policy) noexcept {
  switch (policy) {
    case NegativePolicy::error: return "error";
    case NegativePolicy::clamp_to_zero: return "clamp";
    case NegativePolicy::absolute_value: return "abs";
  }
  return "error";
}

NegativePolicy parse_negative_policy(std::string_view text) {
  if (text == "error") return NegativePolicy::error;
  if (text == "clamp" || text == "clamp_to_zero") return NegativePolicy::clamp_to_zero;
  if (text == "abs" || text == "absolute_value") return NegativePolicy::absolute_value;
  throw Error(ErrorCode::InvalidArgument, "unknown negative policy '" + std::string(text) + "'");
}

SaliencyMap make_saliency(Dims dims, std::vector<double> values, NegativePolicy policy) {
  for (double& v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValues, "saliency contains NaN/Inf");
    if (v < 0.0) {
      switch (policy) {
        case NegativePolicy::error:
          throw Error(ErrorCode::NegativeValues, "saliency contains negative values (see --negatives)");
        case NegativePolicy::clamp_to_zero: v = 0.0; break;
        case NegativePolicy::absolute_value: v = -v; break;
      }
    }
    if (v == 0.0) v = 0.0;  // folds -0.0
  }
  return SaliencyMap(dims, std::move(values));
}

namespace {

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return f;
}

}  // namespace

std::vector<std::uint8_t> encode_smap(const SaliencyMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kSmapHeaderSize + 4 * map.size());
  out.insert(out.end(), {'S', 'M', 'A', 'P', 1});
  put_u32le(out, static_cast<std::uint32_t>(map.height()));
  put_u32le(out, static_cast<std::uint32_t>(map.width()));
  for (double v : map.values()) put_u32le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

SaliencyMap decode_smap(std::span<const std::uint8_t> bytes, NegativePolicy policy) {
  if (bytes.size() < kSmapHeaderSize || std::memcmp(bytes.data(), "SMAP", 4) != 0) {
    throw Error(ErrorCode::FormatError, "missing SMAP header");
  }
  if (bytes[4] != 1) {
    throw Error(ErrorCode::FormatError, "unsupported SMAP version " + std::to_string(bytes[4]));
  }
  const Dims dims{get_u32le(bytes.data() + 5), get_u32le(bytes.data() + 9)};
  if (dims.height == 0 || dims.width == 0) throw Error(ErrorCode::FormatError, "SMAP has empty dims");
  if (bytes.size() - kSmapHeaderSize != 4 * dims.area()) {
    throw Error(ErrorCode::FormatError, "SMAP payload length does not match header");
  }
  std::vector<double> values(dims.area());
  const std::uint8_t* p = bytes.data() + kSmapHeaderSize;
  for (std::size_t i = 0; i < values.size(); ++i, p += 4) {
    values[i] = static_cast<double>(std::bit_cast<float>(get_u32le(p)));
  }
  return make_saliency(dims, std::move(values), policy);
}

void write_saliency(const SaliencyMap& map, const std::filesystem::path& path) {
  write_file(path, encode_smap(map));
}

RasterImage read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorCode::FormatError, path.string() + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoError, "libpng initialisation failed");
  }
  // Heap-held so nothing on this frame changes between setjmp and longjmp.
  struct ReadState {
    RasterImage image;
    std::vector<png_byte> buffer;
    std::vector<png_bytep> rows;
  };
  const auto state = std::make_unique<ReadState>();
  auto& [image, buffer, rows] = *state;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::FormatError, "corrupt PNG " + path.string());
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  image.dims = {png_get_image_height(png, info), png_get_image_width(png, info)};
  image.channels = png_get_channels(png, info);
  image.bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  buffer.resize(row_bytes * image.dims.height);
  rows.resize(image.dims.height);
  for (std::size_t r = 0; r < image.dims.height; ++r) rows[r] = buffer.data() + r * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t n = image.dims.area() * image.channels;
  image.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // PNG stores 16-bit samples big-endian.
    image.samples[i] = image.bit_depth == 16
                           ? static_cast<std::uint16_t>(buffer[2 * i] << 8 | buffer[2 * i + 1])
                           : buffer[i];
  }
  return std::move(image);
}

void write_png(const RasterImage& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorCode::InvalidArgument, "PNG writer supports 1 or 3 channels");
  }
  if (image.bit_depth != 8 && image.bit_depth != 16) {
    throw Error(ErrorCode::InvalidArgument, "PNG writer supports 8 or 16 bit samples");
  }
  const std::size_t bytes_per_sample = image.bit_depth / 8;
  const std::size_t row_bytes = image.dims.width * image.channels * bytes_per_sample;
  std::vector<png_byte> buffer(row_bytes * image.dims.height);
  for (std::size_t i = 0; i < image.samples.size(); ++i) {
    if (bytes_per_sample == 2) {
      buffer[2 * i] = static_cast<png_byte>(image.samples[i] >> 8);
      buffer[2 * i + 1] = static_cast<png_byte>(image.samples[i] & 0xff);
    } else {
      buffer[i] = static_cast<png_byte>(image.samples[i]);
    }
  }
  std::vector<png_bytep> rows(image.dims.height);
  for (std::size_t r = 0; r < image.dims.height; ++r) rows[r] = buffer.data() + r * row_bytes;

  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "failed writing PNG " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.dims.width),
               static_cast<png_uint_32>(image.dims.height), image.bit_depth,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

SaliencyMap read_saliency(const std::filesystem::path& path, NegativePolicy policy) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "SMAP", 4) == 0) {
    try {
      return decode_smap(bytes, policy);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
  const RasterImage image = read_png(path);
  if (image.channels != 1) {
    throw Error(ErrorCode::FormatError, path.string() + ": saliency PNG must be grayscale");
  }
  const double scale = image.bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<double> values(image.samples.size());
  std::transform(image.samples.begin(), image.samples.end(), values.begin(),
                 [scale](std::uint16_t s) { return static_cast<double>(s) / scale; });
  return make_saliency(image.dims, std::move(values), policy);
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
  const RasterImage image = read_png(path);
  if (image.channels != 1) throw Error(ErrorCode::FormatError, path.string() + ": mask must be grayscale");
  std::vector<std::uint8_t> bits(image.samples.size());
  std::transform(image.samples.begin(), image.samples.end(), bits.begin(),
                 [](std::uint16_t s) { return static_cast<std::uint8_t>(s != 0); });
  return BinaryMask(image.dims, std::move(bits));
}

void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  RasterImage image{mask.dims(), 1, 8, {}};
  image.samples.reserve(mask.size());
  for (auto b : mask.bits()) image.samples.push_back(b ? 255 : 0);
  write_png(image, path);
}

void write_saliency_png(const SaliencyMap& map, const std::filesystem::path& path) {
  const auto values = map.values();
  const double peak = *std::max_element(values.begin(), values.end());
  RasterImage image{map.dims(), 1, 16, {}};
  image.samples.reserve(values.size());
  for (double v : values) {
    image.samples.push_back(
        peak > 0.0 ? static_cast<std::uint16_t>(std::lround(v / peak * 65535.0)) : std::uint16_t{0});
  }
  write_png(image, path);
}

}  // namespace wgame
