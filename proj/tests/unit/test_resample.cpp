#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "wgame/error.hpp"
#include "wgame/resample.hpp"
#include "wgame/rng.hpp"

using namespace wgame;
namespace wt = wgame::testing;

TEST_CASE("RngStream determinism and stream separation") {
  RngStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
}

TEST_CASE("RngStream matches the SplitMix64 reference") {
  // Reference values of SplitMix64 seeded with 0: first outputs of the
  // published generator are 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4.
  std::uint64_t state = 0;
  auto reference = [&] { return RngStream::mix(state += RngStream::kGamma); };
  CHECK(reference() == 0xE220A8397B1DCDAFULL);
  CHECK(reference() == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("RngStream ranges") {
  RngStream rng(7, 3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.uniform_int(6) <= 6);
  }
  CHECK(rng.uniform_int(0) == 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(rng.uniform_int(4));
  CHECK(seen.size() == 5);
}

TEST_CASE("bilinear_resize identity and constants") {
  std::mt19937_64 gen(1);
  const auto m = wt::random_map(gen, {13, 17});
  CHECK(bilinear_resize(m, m.dims()) == m);

  const SaliencyMap constant({5, 7}, 0.3);
  for (Dims out : {Dims{1, 1}, Dims{3, 11}, Dims{20, 2}, Dims{64, 64}}) {
    const auto r = bilinear_resize(constant, out);
    CHECK(r.dims() == out);
    for (double v : r.values()) CHECK(v == 0.3);
  }
}

TEST_CASE("bilinear_resize matches the closed-form convention") {
  const SaliencyMap checker({2, 2}, {0, 1, 1, 0});
  const auto up = bilinear_resize(checker, {4, 4});
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(up(r, c) == doctest::Approx(wt::bilinear_formula(checker, {4, 4}, r, c)).epsilon(1e-15));
  // Corners clamp, interior pixels blend at quarter offsets.
  CHECK(up(0, 0) == 0.0);
  CHECK(up(1, 1) == doctest::Approx(0.375));
  CHECK(up(1, 2) == doctest::Approx(0.625));

  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<std::size_t> side(1, 30);
    const auto src = wt::random_map(gen, {side(gen), side(gen)});
    const Dims out{side(gen), side(gen)};
    const auto r = bilinear_resize(src, out);
    const auto [lo, hi] = std::minmax_element(src.values().begin(), src.values().end());
    for (std::size_t y = 0; y < out.height; ++y) {
      for (std::size_t x = 0; x < out.width; ++x) {
        CHECK(r(y, x) == doctest::Approx(wt::bilinear_formula(src, out, y, x)).epsilon(1e-12));
        CHECK(r(y, x) >= *lo);
        CHECK(r(y, x) <= *hi);
      }
    }
  }
}

TEST_CASE("apply_crop") {
  std::mt19937_64 gen(3);
  const auto m = wt::random_map(gen, {4, 4});
  CHECK(apply_crop(m, CropSpec{0, 0, 4, 4, 4}) == m);

  const auto window = apply_crop(m, CropSpec{1, 1, 2, 2, 2});
  CHECK(window == SaliencyMap({2, 2}, {m(1, 1), m(1, 2), m(2, 1), m(2, 2)}));

  const auto big = wt::random_map(gen, {224, 224});
  const CropSpec crop{20, 30, 180, 224, 224};
  CHECK(apply_crop(big, crop) == bilinear_resize(extract_window(big, 20, 30, 180), {224, 224}));

  CHECK_THROWS_AS(apply_crop(m, CropSpec{1, 1, 4, 4, 4}), Error);
  try {
    apply_crop(m, CropSpec{3, 0, 2, 2, 2});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CropOutOfBounds);
  }
}

TEST_CASE("sample_crop examples") {
  CHECK(sample_crop(RngStream(9, 9), {64, 64}, 1.0, 1.0) == CropSpec{0, 0, 64, 64, 64});
  CHECK(sample_crop(RngStream(5, 2), {100, 80}, 0.75, 0.9) ==
        sample_crop(RngStream(5, 2), {100, 80}, 0.75, 0.9));
  // Frozen from a reference run of the generator; must never change.
  CHECK(sample_crop(RngStream(42, 0), {224, 224}, 0.75, 0.9) == CropSpec{14, 11, 209, 224, 224});
  CHECK_THROWS_AS(sample_crop(RngStream(1, 1), {10, 10}, 0.0, 0.5), Error);
  CHECK_THROWS_AS(sample_crop(RngStream(1, 1), {10, 10}, 0.8, 0.5), Error);
}

TEST_CASE("sample_crop distribution") {
  const Dims dims{224, 224};
  double sum_s = 0.0;
  constexpr int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    RngStream rng(2024, static_cast<std::uint64_t>(i));
    RngStream replay = rng;
    sum_s += replay.uniform_real(0.75, 0.9);
    const auto crop = sample_crop(rng, dims, 0.75, 0.9);
    CHECK(crop.side >= 1);
    CHECK(crop.fits(dims));
    CHECK(crop.out_dims() == dims);
  }
  const double mean = sum_s / draws;
  CHECK(std::abs(mean - 0.825) / 0.825 < 0.005);
}

TEST_CASE("synthesize_zoom_sequence") {
  const auto two = synthesize_zoom_sequence({90, 120}, 2, 1.5);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == CropSpec{0, 15, 90, 90, 120});
  CHECK(two[1].side == 60);
  CHECK(two[1].out_dims() == Dims{90, 120});

  const auto seq = synthesize_zoom_sequence({224, 224});
  REQUIRE(seq.size() == 150);
  CHECK(seq[0] == CropSpec{0, 0, 224, 224, 224});
  const auto apex = std::min_element(seq.begin(), seq.end(),
                                     [](const CropSpec& a, const CropSpec& b) { return a.side < b.side; });
  CHECK(apex - seq.begin() == 75);
  CHECK(seq[75].side == 149);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    CHECK(seq[i].side == seq[seq.size() - i].side);
    CHECK(seq[i].fits({224, 224}));
  }
  CHECK_THROWS_AS(synthesize_zoom_sequence({10, 10}, 1, 1.5), Error);
  CHECK_THROWS_AS(synthesize_zoom_sequence({10, 10}, 10, 1.0), Error);
}
