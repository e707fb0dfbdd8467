#include "wgame/coco.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "wgame/error.hpp"

namespace wgame {

using nlohmann::json;

namespace {

const json& require_key(const json& object, const char* key, const char* context) {
  if (!object.is_object() || !object.contains(key)) {
    throw Error(ErrorCode::SchemaError, std::string(context) + " is missing key '" + key + "'");
  }
  return object.at(key);
}

std::int64_t require_int(const json& object, const char* key, const char* context) {
  const json& v = require_key(object, key, context);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::SchemaError, std::string(context) + "." + key + " must be an integer");
  }
  return v.get<std::int64_t>();
}

InstanceShape parse_segmentation(const json& seg, Dims image_dims, bool crowd) {
  InstanceShape shape;
  shape.crowd = crowd;
  if (seg.is_array()) {
    PolygonShape poly;
    for (const json& ring : seg) {
      if (!ring.is_array()) throw Error(ErrorCode::SchemaError, "polygon ring must be an array");
      PolygonRing coords;
      coords.reserve(ring.size());
      for (const json& v : ring) {
        if (!v.is_number()) throw Error(ErrorCode::SchemaError, "polygon coordinate must be numeric");
        coords.push_back(v.get<double>());
      }
      if (coords.size() % 2 != 0) {
        throw Error(ErrorCode::SchemaError, "polygon ring has an odd number of coordinates");
      }
      poly.rings.push_back(std::move(coords));
    }
    shape.geometry = std::move(poly);
    return shape;
  }
  if (seg.is_object()) {
    const json& size = require_key(seg, "size", "RLE segmentation");
    if (!size.is_array() || size.size() != 2) {
      throw Error(ErrorCode::SchemaError, "RLE size must be [height, width]");
    }
    const Dims rle_dims{size[0].get<std::size_t>(), size[1].get<std::size_t>()};
    if (rle_dims != image_dims) {
      throw Error(ErrorCode::SchemaError, "RLE size does not match image dimensions");
    }
    const json& counts = require_key(seg, "counts", "RLE segmentation");
    if (counts.is_string()) {
      shape.geometry = CompressedRle{counts.get<std::string>()};
    } else if (counts.is_array()) {
      UncompressedRle rle;
      rle.counts.reserve(counts.size());
      for (const json& c : counts) {
        if (!c.is_number_integer() || c.get<std::int64_t>() < 0) {
          throw Error(ErrorCode::SchemaError, "RLE counts must be non-negative integers");
        }
        rle.counts.push_back(c.get<std::uint32_t>());
      }
      shape.geometry = std::move(rle);
    } else {
      throw Error(ErrorCode::SchemaError, "RLE counts must be a string or an array");
    }
    return shape;
  }
  throw Error(ErrorCode::SchemaError, "segmentation must be a polygon list or an RLE object");
}

std::vector<ClassAnnotationSet> group_annotations(const json& doc, const AnnotationOptions& options) {
  const json& images = require_key(doc, "images", "annotation document");
  const json& annotations = require_key(doc, "annotations", "annotation document");
  const json& categories = require_key(doc, "categories", "annotation document");
  if (!images.is_array() || !annotations.is_array() || !categories.is_array()) {
    throw Error(ErrorCode::SchemaError, "images, annotations and categories must be arrays");
  }

  std::map<std::int64_t, Dims> image_dims;
  for (const json& image : images) {
    const auto id = require_int(image, "id", "image");
    const auto h = require_int(image, "height", "image");
    const auto w = require_int(image, "width", "image");
    if (h <= 0 || w <= 0) throw Error(ErrorCode::SchemaError, "image dimensions must be positive");
    image_dims[id] = Dims{static_cast<std::size_t>(h), static_cast<std::size_t>(w)};
  }

  std::map<std::pair<std::int64_t, std::int64_t>, ClassAnnotationSet> groups;
  for (const json& ann : annotations) {
    const auto image_id = require_int(ann, "image_id", "annotation");
    const auto class_id = require_int(ann, "category_id", "annotation");
    if (options.category_filter && !options.category_filter->contains(class_id)) continue;
    const bool crowd = ann.contains("iscrowd") && ann.at("iscrowd").is_number() &&
                       ann.at("iscrowd").get<int>() != 0;
    if (crowd && !options.include_crowd) continue;

    const auto dims_it = image_dims.find(image_id);
    if (dims_it == image_dims.end()) {
      throw Error(ErrorCode::SchemaError,
                  "annotation references unknown image_id " + std::to_string(image_id));
    }
    InstanceShape shape =
        parse_segmentation(require_key(ann, "segmentation", "annotation"), dims_it->second, crowd);

    auto [it, inserted] = groups.try_emplace({image_id, class_id});
    if (inserted) {
      it->second.image_id = image_id;
      it->second.class_id = class_id;
      it->second.image_dims = dims_it->second;
    }
    it->second.instances.push_back(std::move(shape));
  }

  std::vector<ClassAnnotationSet> out;
  out.reserve(groups.size());
  for (auto& [key, set] : groups) out.push_back(std::move(set));
  if (out.empty()) throw Error(ErrorCode::EmptyDataset, "no (image, class) pairs with annotations");
  return out;
}

}  // namespace

std::vector<ClassAnnotationSet> parse_annotations_text(std::string_view json_text,
                                                       const AnnotationOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    return group_annotations(doc, options);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

std::vector<ClassAnnotationSet> parse_annotations(const std::filesystem::path& path,
                                                  const AnnotationOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_annotations_text(buffer.str(), options);
}

BinaryMask decode_rle(std::span<const std::uint32_t> counts, Dims dims) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total != dims.area()) {
    throw Error(ErrorCode::RleLengthMismatch, "run lengths sum to " + std::to_string(total) +
                                                  ", expected " + std::to_string(dims.area()));
  }
  // Runs walk the image column by column.
  BinaryMask mask(dims);
  std::size_t index = 0;
  bool value = false;
  for (auto run : counts) {
    if (value) {
      for (std::size_t k = index; k < index + run; ++k) {
        mask.set(k % dims.height, k / dims.height);
      }
    }
    index += run;
    value = !value;
  }
  return mask;
}

std::vector<std::uint32_t> decompress_rle_counts(std::string_view encoded) {
  std::vector<std::int64_t> counts;
  std::size_t pos = 0;
  while (pos < encoded.size()) {
    std::int64_t x = 0;
    int chunk = 0;
    bool more = true;
    while (more) {
      if (pos >= encoded.size()) throw Error(ErrorCode::RleCorrupt, "truncated counts string");
      const int c = static_cast<unsigned char>(encoded[pos]) - 48;
      if (c < 0 || c > 63) throw Error(ErrorCode::RleCorrupt, "byte outside the 6-bit alphabet");
      if (chunk >= 12) throw Error(ErrorCode::RleCorrupt, "run length overflows 64 bits");
      x |= static_cast<std::int64_t>(c & 0x1f) << (5 * chunk);
      more = (c & 0x20) != 0;
      ++pos;
      ++chunk;
      if (!more && (c & 0x10)) x |= ~std::int64_t{0} << (5 * chunk);
    }
    if (counts.size() > 2) x += counts[counts.size() - 2];
    if (x < 0 || x > std::int64_t{0xffffffff}) {
      throw Error(ErrorCode::RleCorrupt, "decoded run length out of range");
    }
    counts.push_back(x);
  }
  return {counts.begin(), counts.end()};
}

BinaryMask decode_rle(std::string_view encoded, Dims dims) {
  const auto counts = decompress_rle_counts(encoded);
  return decode_rle(std::span<const std::uint32_t>(counts), dims);
}

RasterResult rasterize_polygon(const std::vector<PolygonRing>& rings, Dims dims) {
  RasterResult result{BinaryMask(dims), false};
  const double max_x = static_cast<double>(dims.width);
  const double max_y = static_cast<double>(dims.height);
  std::vector<double> crossings;

  for (const auto& ring : rings) {
    const std::size_t n = ring.size() / 2;
    if (n < 3) {
      result.degenerate = true;
      continue;
    }
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = std::clamp(ring[2 * i], 0.0, max_x);
      ys[i] = std::clamp(ring[2 * i + 1], 0.0, max_y);
    }
    double twice_area = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      twice_area += xs[j] * ys[i] - xs[i] * ys[j];
    }
    if (twice_area == 0.0) {
      result.degenerate = true;
      continue;
    }

    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    const auto first_row = static_cast<std::size_t>(std::max(0.0, std::floor(*lo - 0.5)));
    const auto last_row = std::min(dims.height, static_cast<std::size_t>(std::ceil(*hi)));
    for (std::size_t row = first_row; row < last_row; ++row) {
      const double yc = static_cast<double>(row) + 0.5;
      crossings.clear();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((ys[i] <= yc) != (ys[j] <= yc)) {
          crossings.push_back(xs[i] + (yc - ys[i]) * (xs[j] - xs[i]) / (ys[j] - ys[i]));
        }
      }
      std::sort(crossings.begin(), crossings.end());
      // Center cx is inside iff an odd number of crossings lie strictly to
      // its right, i.e. crossings[2k] <= cx < crossings[2k+1].
      for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
        const double begin = std::max(0.0, std::ceil(crossings[k] - 0.5));
        const double end = std::min(max_x, std::ceil(crossings[k + 1] - 0.5));
        for (auto col = static_cast<std::size_t>(begin); static_cast<double>(col) < end; ++col) {
          result.mask.set(row, col);
        }
      }
    }
  }
  return result;
}

BinaryMask instance_mask(const InstanceShape& shape, Dims dims) {
  return std::visit(
      [&](const auto& geometry) -> BinaryMask {
        using T = std::decay_t<decltype(geometry)>;
        if constexpr (std::is_same_v<T, PolygonShape>) {
          return rasterize_polygon(geometry.rings, dims).mask;
        } else if constexpr (std::is_same_v<T, UncompressedRle>) {
          return decode_rle(std::span<const std::uint32_t>(geometry.counts), dims);
        } else {
          return decode_rle(std::string_view(geometry.counts), dims);
        }
      },
      shape.geometry);
}

BinaryMask class_union_mask(const ClassAnnotationSet& set) {
  BinaryMask mask(set.image_dims);
  for (const auto& instance : set.instances) mask |= instance_mask(instance, set.image_dims);
  return mask;
}

}  // namespace wgame
