#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "wgame/grid.hpp"

namespace wgame::testing {

inline BinaryMask random_mask(std::mt19937_64& gen, Dims dims, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<std::uint8_t> bits(dims.area());
  for (auto& b : bits) b = bit(gen) ? 1 : 0;
  return BinaryMask(dims, std::move(bits));
}

inline SaliencyMap random_map(std::mt19937_64& gen, Dims dims, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(dims.area());
  for (auto& x : v) x = u(gen);
  return SaliencyMap(dims, std::move(v));
}

/// Values drawn from a small set of levels so exact ties are common.
inline SaliencyMap random_tied_map(std::mt19937_64& gen, Dims dims, int levels) {
  std::uniform_int_distribution<int> u(0, levels - 1);
  std::vector<double> v(dims.area());
  for (auto& x : v) x = 0.25 * u(gen);
  return SaliencyMap(dims, std::move(v));
}

/// Plain left-to-right summation in long double.
inline long double naive_sum(const SaliencyMap& map) {
  long double s = 0.0L;
  for (double v : map.values()) s += v;
  return s;
}

/// {p : exists q in M with |p - q|_inf <= r}, evaluated per output pixel.
inline BinaryMask brute_force_dilate(const BinaryMask& mask, std::size_t size) {
  const long r = static_cast<long>((size - 1) / 2);
  const long h = static_cast<long>(mask.height()), w = static_cast<long>(mask.width());
  BinaryMask out(mask.dims());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      bool hit = false;
      for (long qy = std::max(0L, y - r); qy <= std::min(h - 1, y + r) && !hit; ++qy) {
        for (long qx = std::max(0L, x - r); qx <= std::min(w - 1, x + r) && !hit; ++qx) {
          hit = mask(qy, qx);
        }
      }
      if (hit) out.set(y, x);
    }
  }
  return out;
}

/// Rank = (#strictly smaller) + (#equal + 1) / 2, by exhaustive comparison.
inline std::vector<long double> exhaustive_ranks(const std::vector<double>& v) {
  std::vector<long double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      if (w == v[i]) ++equal;
    }
    ranks[i] = static_cast<long double>(less) + (static_cast<long double>(equal) + 1.0L) / 2.0L;
  }
  return ranks;
}

/// Rank-then-Pearson in long double with two-pass means.
inline double rank_pearson_oracle(const SaliencyMap& a, const SaliencyMap& b) {
  const std::vector<double> va(a.values().begin(), a.values().end());
  const std::vector<double> vb(b.values().begin(), b.values().end());
  const auto ra = exhaustive_ranks(va);
  const auto rb = exhaustive_ranks(vb);
  const long double n = static_cast<long double>(ra.size());
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

/// Column-major run lengths, starting with a (possibly empty) background run.
inline std::vector<std::uint32_t> encode_rle(const BinaryMask& mask) {
  std::vector<std::uint32_t> counts;
  bool current = false;
  std::uint32_t run = 0;
  for (std::size_t col = 0; col < mask.width(); ++col) {
    for (std::size_t row = 0; row < mask.height(); ++row) {
      if (mask(row, col) != current) {
        counts.push_back(run);
        run = 0;
        current = !current;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

/// COCO rleToString: 5 data bits per char, 0x20 continuation, offset 48,
/// counts[i] stored relative to counts[i-2] for i > 2.
inline std::string compress_rle_counts(const std::vector<std::uint32_t>& counts) {
  std::string s;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    long long x = counts[i];
    if (i > 2) x -= static_cast<long long>(counts[i - 2]);
    bool more = true;
    while (more) {
      char c = static_cast<char>(x & 0x1f);
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      s.push_back(static_cast<char>(c + 48));
    }
  }
  return s;
}

/// PNPOLY crossing test at pixel centers, one ring at a time, OR-ed.
inline BinaryMask pnpoly_mask(const std::vector<std::vector<double>>& rings, Dims dims) {
  BinaryMask out(dims);
  for (const auto& ring : rings) {
    const std::size_t n = ring.size() / 2;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = std::clamp(ring[2 * i], 0.0, static_cast<double>(dims.width));
      ys[i] = std::clamp(ring[2 * i + 1], 0.0, static_cast<double>(dims.height));
    }
    for (std::size_t r = 0; r < dims.height; ++r) {
      for (std::size_t c = 0; c < dims.width; ++c) {
        const double px = c + 0.5, py = r + 0.5;
        bool inside = false;
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
          if ((ys[i] > py) != (ys[j] > py) &&
              px < (xs[j] - xs[i]) * (py - ys[i]) / (ys[j] - ys[i]) + xs[i]) {
            inside = !inside;
          }
        }
        if (inside) out.set(r, c);
      }
    }
  }
  return out;
}

/// Port of the COCO API's rleFrPoly scanline rasterizer (5x upsampled
/// boundary walk), returning a mask instead of run lengths.
inline BinaryMask coco_scanline_reference(const std::vector<double>& xy, Dims dims) {
  const long h = static_cast<long>(dims.height), w = static_cast<long>(dims.width);
  const std::size_t k = xy.size() / 2;
  const double scale = 5;
  std::vector<int> x(k + 1), y(k + 1);
  for (std::size_t j = 0; j < k; ++j) x[j] = static_cast<int>(scale * xy[j * 2] + .5);
  x[k] = x[0];
  for (std::size_t j = 0; j < k; ++j) y[j] = static_cast<int>(scale * xy[j * 2 + 1] + .5);
  y[k] = y[0];
  std::vector<int> u, v;
  for (std::size_t j = 0; j < k; ++j) {
    int xs = x[j], xe = x[j + 1], ys = y[j], ye = y[j + 1];
    const int dx = std::abs(xe - xs), dy = std::abs(ys - ye);
    const bool flip = (dx >= dy && xs > xe) || (dx < dy && ys > ye);
    if (flip) {
      std::swap(xs, xe);
      std::swap(ys, ye);
    }
    const double s = dx >= dy ? static_cast<double>(ye - ys) / dx : static_cast<double>(xe - xs) / dy;
    if (dx >= dy) {
      for (int d = 0; d <= dx; ++d) {
        const int t = flip ? dx - d : d;
        u.push_back(t + xs);
        v.push_back(static_cast<int>(ys + s * t + .5));
      }
    } else {
      for (int d = 0; d <= dy; ++d) {
        const int t = flip ? dy - d : d;
        v.push_back(t + ys);
        u.push_back(static_cast<int>(xs + s * t + .5));
      }
    }
  }
  std::vector<long> bx, by;
  for (std::size_t j = 1; j < u.size(); ++j) {
    if (u[j] == u[j - 1]) continue;
    double xd = u[j] < u[j - 1] ? u[j] : u[j] - 1;
    xd = (xd + .5) / scale - .5;
    if (std::floor(xd) != xd || xd < 0 || xd > w - 1) continue;
    double yd = v[j] < v[j - 1] ? v[j] : v[j - 1];
    yd = (yd + .5) / scale - .5;
    if (yd < 0) yd = 0;
    else if (yd > h) yd = h;
    yd = std::ceil(yd);
    bx.push_back(static_cast<long>(xd));
    by.push_back(static_cast<long>(yd));
  }
  std::vector<unsigned long> a;
  for (std::size_t j = 0; j < bx.size(); ++j) a.push_back(static_cast<unsigned long>(bx[j] * h + by[j]));
  a.push_back(static_cast<unsigned long>(h * w));
  std::sort(a.begin(), a.end());
  unsigned long p = 0;
  for (auto& t : a) {
    const unsigned long cur = t;
    t -= p;
    p = cur;
  }
  std::vector<std::uint32_t> b;
  std::size_t j = 0;
  b.push_back(static_cast<std::uint32_t>(a[j++]));
  while (j < a.size()) {
    if (a[j] > 0) {
      b.push_back(static_cast<std::uint32_t>(a[j++]));
    } else {
      ++j;
      if (j < a.size()) b.back() += static_cast<std::uint32_t>(a[j++]);
    }
  }
  // Column-major decode of the run lengths.
  BinaryMask out(dims);
  std::size_t index = 0;
  bool value = false;
  for (auto run : b) {
    if (value) {
      for (std::size_t q = index; q < index + run; ++q) out.set(q % dims.height, q / dims.height);
    }
    index += run;
    value = !value;
  }
  return out;
}

/// Random convex polygon: one vertex per equal angular sector of an ellipse,
/// jittered inside the middle of its sector. Gaps stay under 180 degrees, so
/// the ring always wraps the center and
/// never collapses into a sub-pixel sliver.
inline std::vector<double> random_convex_polygon(std::mt19937_64& gen, Dims dims) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cx = dims.width * (0.35 + 0.3 * unit(gen));
  const double cy = dims.height * (0.35 + 0.3 * unit(gen));
  const double max_r = 0.3 * std::min(dims.width, dims.height);
  const double rx = max_r * (0.6 + 0.4 * unit(gen));
  const double ry = max_r * (0.6 + 0.4 * unit(gen));
  std::uniform_int_distribution<int> count(3, 12);
  const int n = count(gen);
  const double sector = 2.0 * M_PI / n;
  const double phase = sector * unit(gen);
  std::vector<double> ring;
  for (int k = 0; k < n; ++k) {
    const double a = phase + sector * (k + 0.2 + 0.6 * unit(gen));
    ring.push_back(cx + rx * std::cos(a));
    ring.push_back(cy + ry * std::sin(a));
  }
  return ring;
}

/// Half-pixel bilinear sample evaluated straight from the formula.
inline double bilinear_formula(const SaliencyMap& src, Dims out, std::size_t r, std::size_t c) {
  const double H = src.height(), W = src.width();
  double sy = (r + 0.5) * H / out.height - 0.5;
  double sx = (c + 0.5) * W / out.width - 0.5;
  sy = std::min(std::max(sy, 0.0), H - 1);
  sx = std::min(std::max(sx, 0.0), W - 1);
  const auto y0 = static_cast<std::size_t>(std::floor(sy));
  const auto x0 = static_cast<std::size_t>(std::floor(sx));
  const std::size_t y1 = std::min<std::size_t>(y0 + 1, src.height() - 1);
  const std::size_t x1 = std::min<std::size_t>(x0 + 1, src.width() - 1);
  const double fy = sy - y0, fx = sx - x0;
  return (1 - fy) * (1 - fx) * src(y0, x0) + (1 - fy) * fx * src(y0, x1) + fy * (1 - fx) * src(y1, x0) +
         fy * fx * src(y1, x1);
}

inline double symmetric_difference_fraction(const BinaryMask& a, const BinaryMask& reference) {
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a.at_index(i) != reference.at_index(i);
  const std::size_t ref_area = reference.count();
  return ref_area == 0 ? (diff == 0 ? 0.0 : 1.0) : static_cast<double>(diff) / static_cast<double>(ref_area);
}

}  // namespace wgame::testing
