#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "wgame/error.hpp"
#include "wgame/image_io.hpp"
#include "wgame/stability.hpp"
#include "wgame/synth.hpp"

using namespace wgame;
namespace fs = std::filesystem;
namespace wt = wgame::testing;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(WGAME_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected wgame::Error");
  return ErrorCode::InvalidArgument;
}

/// Loader backed by an in-memory table keyed by path string.
MapLoader table_loader(std::map<std::string, SaliencyMap> table) {
  return [table = std::move(table)](const fs::path& p) { return table.at(p.string()); };
}

}  // namespace

TEST_CASE("spearman examples") {
  const SaliencyMap a({2, 2}, {1, 2, 3, 4});
  const SaliencyMap b({2, 2}, {1, 3, 2, 4});
  CHECK(std::abs(spearman(a, b) - 0.8) <= 1e-12);
  CHECK(spearman(a, a) == 1.0);
  CHECK(spearman(a, SaliencyMap({2, 2}, {3, 2, 1, 0})) == -1.0);
  CHECK(code_of([&] { spearman(a, SaliencyMap({2, 2}, 1.0)); }) == ErrorCode::DegenerateRanks);
  CHECK(code_of([&] { spearman(a, SaliencyMap({1, 4}, {1, 2, 3, 4})); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("average_ranks") {
  const std::vector<double> v{0.5, 0.1, 0.5, 0.9, 0.5};
  CHECK(average_ranks(v) == std::vector<double>{3.0, 1.0, 3.0, 5.0, 3.0});
  const std::vector<double> w{2, 2, 1, 1};
  CHECK(average_ranks(w) == std::vector<double>{3.5, 3.5, 1.5, 1.5});
}

TEST_CASE("spearman matches the rank oracle with ties") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Dims dims{12, 12};
    const auto a = trial % 2 ? wt::random_tied_map(gen, dims, 6) : wt::random_map(gen, dims);
    const auto b = wt::random_tied_map(gen, dims, 3 + trial % 5);
    if (is_constant(a) || is_constant(b)) continue;
    const double rho = spearman(a, b);
    CHECK(std::abs(rho - wt::rank_pearson_oracle(a, b)) <= 1e-12);
    CHECK(std::abs(rho - spearman(b, a)) <= 1e-12);
    CHECK(rho >= -1.0);
    CHECK(rho <= 1.0);

    std::vector<double> t(a.values().begin(), a.values().end());
    for (auto& x : t) x = std::exp(x);
    CHECK(std::abs(spearman(SaliencyMap(dims, t), b) - rho) <= 1e-12);
    for (auto& x : t) x = 3.0 * x + 0.5;
    CHECK(std::abs(spearman(SaliencyMap(dims, t), b) - rho) <= 1e-12);
    CHECK(spearman(a, a) == 1.0);
  }
}

TEST_CASE("default_pair_starts") {
  CHECK(default_pair_starts(150) == std::vector<std::size_t>{0, 30, 60, 90, 120});
  CHECK(default_pair_starts(2) == std::vector<std::size_t>{0});
  CHECK(default_pair_starts(4) == std::vector<std::size_t>{0, 1, 2});
  CHECK(default_pair_starts(1).empty());
  CHECK(default_pair_starts(10, 2) == std::vector<std::size_t>{0, 5});
}

TEST_CASE("frame_stability") {
  std::mt19937_64 gen(5);
  const auto map = wt::random_map(gen, {8, 8});
  FrameSequenceManifest manifest{"v", 3, {}, {}};
  std::map<std::string, SaliencyMap> table;
  for (int i = 0; i < 10; ++i) {
    const std::string name = "f" + std::to_string(i);
    manifest.frames.emplace_back(name);
    table.emplace(name, i == 7 ? SaliencyMap({8, 8}, 0.5) : map);
  }
  manifest.pair_starts = {0, 4, 6};
  const auto result = frame_stability(manifest, table_loader(table));
  REQUIRE(result.records.size() == 3);
  CHECK(*result.records[0].correlation == 1.0);
  CHECK(result.records[1].pair_index == 4);
  CHECK(result.records[2].degenerate);
  CHECK_FALSE(result.records[2].correlation.has_value());
  CHECK(*result.subject_mean == 1.0);

  manifest.pair_starts = {9};
  CHECK(code_of([&] { frame_stability(manifest, table_loader(table)); }) == ErrorCode::ManifestError);
  manifest.frames.resize(1);
  manifest.pair_starts = {0};
  CHECK(code_of([&] { validate_frame_manifest(manifest); }) == ErrorCode::ManifestError);
}

TEST_CASE("parse_frame_manifest") {
  const auto dir = fresh_dir("frames");
  nlohmann::json doc = {{"subject_id", "clip"}, {"class_id", 4}, {"frames", {"a.smap", "b.smap", "c.smap"}}};
  std::ofstream(dir / "m.json") << doc.dump();
  const auto m = parse_frame_manifest(dir / "m.json");
  CHECK(m.subject_id == "clip");
  CHECK(m.class_id == 4);
  CHECK(m.frames[1] == dir / "b.smap");
  CHECK(m.pair_starts == std::vector<std::size_t>{0, 1});

  doc["pairs"] = {1};
  std::ofstream(dir / "m2.json") << doc.dump();
  CHECK(parse_frame_manifest(dir / "m2.json").pair_starts == std::vector<std::size_t>{1});

  doc["pairs"] = {2};
  std::ofstream(dir / "bad.json") << doc.dump();
  CHECK(code_of([&] { parse_frame_manifest(dir / "bad.json"); }) == ErrorCode::ManifestError);
  std::ofstream(dir / "broken.json") << "{";
  CHECK(code_of([&] { parse_frame_manifest(dir / "broken.json"); }) == ErrorCode::ManifestError);
  CHECK(code_of([&] { parse_frame_manifest(dir / "missing.json"); }) == ErrorCode::IoError);
}

TEST_CASE("crop_stability") {
  std::mt19937_64 gen(9);
  const auto s = wt::random_map(gen, {32, 32});
  const CropSpec crop{3, 5, 24, 32, 32};
  CHECK(crop_stability(s, apply_crop(s, crop), crop) == 1.0);
  CHECK(code_of([&] { crop_stability(s, SaliencyMap({32, 32}, 1.0), crop); }) == ErrorCode::DegenerateRanks);
  CHECK(code_of([&] { crop_stability(s, SaliencyMap({16, 16}, 1.0), crop); }) == ErrorCode::DimensionMismatch);

  // Landmark rendered independently at both resolutions.
  const SyntheticScene scene{{96, 96}, {{ShapeKind::rectangle, 1, 40.0, 52.0, 8, 8}}};
  const CropSpec zoom{10, 12, 78, 96, 96};
  const auto original = equivariant_saliency(scene, std::nullopt, {6.0, {}});
  const auto transformed = equivariant_saliency(scene, zoom, {6.0, {}});
  CHECK(crop_stability(original, transformed, zoom) >= 0.99);
}

TEST_CASE("crop_stability_batch") {
  CHECK(code_of([] { crop_stability_batch({}, table_loader({})); }) == ErrorCode::EmptyAggregate);

  const SaliencyMap sq({4, 4}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16});
  std::vector<double> swapped(sq.values().begin(), sq.values().end());
  for (std::size_t i = 0; i < 16; i += 2) std::swap(swapped[i], swapped[i + 1]);
  const SaliencyMap sw({4, 4}, swapped);
  const MapLoader loader = table_loader({{"sq", sq}, {"sw", sw}});
  const CropSpec full{0, 0, 4, 4, 4};
  const std::vector<CropManifestEntry> entries{{"e0", 1, "sq", "sq", full}, {"e1", 1, "sq", "sw", full}};
  const auto result = crop_stability_batch(entries, loader);
  REQUIRE(result.records.size() == 2);
  CHECK(*result.records[0].correlation == 1.0);
  CHECK(result.records[1].pair_index == 1);
  CHECK(*result.summary.mean_correlation == (1.0 + spearman(sq, sw)) / 2);
}

TEST_CASE("summarize_stability pooled and per-subject means") {
  std::vector<StabilityRecord> records;
  auto add = [&](std::string subject, std::optional<double> rho) {
    StabilityRecord r;
    r.subject_id = std::move(subject);
    r.correlation = rho;
    r.degenerate = !rho;
    records.push_back(r);
  };
  add("a", 1.0);
  add("b", 0.5);
  add("a", 0.0);
  add("b", std::nullopt);
  const auto s = summarize_stability(records);
  CHECK(s.record_count == 3);
  CHECK(s.degenerate_count == 1);
  CHECK(*s.mean_correlation == 0.5);
  REQUIRE(s.subject_means.size() == 2);
  CHECK(s.subject_means[0] == std::pair<std::string, double>{"a", 0.5});
  CHECK(s.subject_means[1] == std::pair<std::string, double>{"b", 0.5});

  add("x", 1.0);
  records.erase(records.begin(), records.begin() + 4);
  records.insert(records.begin(), StabilityRecord{"y", 0, StabilityProtocol::crop, 0.5, 0, false, ""});
  CHECK(*summarize_stability(records).mean_correlation == 0.75);
}

TEST_CASE("crop_stability_batch mean matches recomputation and sampled crops are deterministic") {
  std::mt19937_64 gen(31);
  std::vector<CropManifestEntry> entries;
  std::map<std::string, SaliencyMap> table;
  for (int i = 0; i < 100; ++i) {
    const auto original = wt::random_map(gen, {24, 24});
    const std::string o = "o" + std::to_string(i), t = "t" + std::to_string(i);
    const CropSpec crop = sample_crop(RngStream(555, static_cast<std::uint64_t>(i)), {24, 24}, 0.75, 0.9);
    auto noisy = apply_crop(original, crop);
    std::vector<double> v(noisy.values().begin(), noisy.values().end());
    std::uniform_real_distribution<double> jitter(0.0, 0.3);
    for (auto& x : v) x += jitter(gen);
    table.emplace(o, original);
    table.emplace(t, SaliencyMap({24, 24}, v));
    entries.push_back({std::to_string(i), 1, o, t, i % 2 ? std::optional<CropSpec>(crop) : std::nullopt});
  }
  CropBatchOptions options;
  options.master_seed = 555;
  const auto loader = table_loader(table);
  const auto one = crop_stability_batch(entries, loader, options);
  options.workers = 8;
  const auto eight = crop_stability_batch(entries, loader, options);
  CHECK(one.records == eight.records);

  long double sum = 0.0L;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const CropSpec crop = sample_crop(RngStream(555, i), {24, 24}, 0.75, 0.9);
    const double rho = wt::rank_pearson_oracle(apply_crop(table.at(e.original.string()), crop),
                                               table.at(e.transformed.string()));
    CHECK(std::abs(*one.records[i].correlation - rho) <= 1e-12);
    sum += *one.records[i].correlation;
  }
  CHECK(std::abs(*one.summary.mean_correlation - static_cast<double>(sum / 100)) <= 1e-12);
}

TEST_CASE("parse_crop_manifest") {
  const auto dir = fresh_dir("cropmanifest");
  const nlohmann::json doc = {
      {"entries",
       {{{"id", 12}, {"original", "o.smap"}, {"transformed", "/abs/t.smap"},
         {"crop", {{"top", 1}, {"left", 2}, {"side", 3}, {"out_h", 4}, {"out_w", 5}}}},
        {{"id", "x"}, {"class_id", 7}, {"original", "o.smap"}, {"transformed", "t.smap"}}}}};
  std::ofstream(dir / "m.json") << doc.dump();
  const auto entries = parse_crop_manifest(dir / "m.json");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].id == "12");
  CHECK(entries[0].original == dir / "o.smap");
  CHECK(entries[0].transformed == fs::path("/abs/t.smap"));
  CHECK(*entries[0].crop == CropSpec{1, 2, 3, 4, 5});
  CHECK(entries[1].class_id == 7);
  CHECK_FALSE(entries[1].crop.has_value());

  std::ofstream(dir / "bad.json") << R"({"entries": [{"id": 1, "original": "o"}]})";
  CHECK(code_of([&] { parse_crop_manifest(dir / "bad.json"); }) == ErrorCode::ManifestError);
}
