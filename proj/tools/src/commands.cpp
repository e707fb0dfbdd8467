#include "wgame/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wgame/accuracy.hpp"
#include "wgame/coco.hpp"
#include "wgame/error.hpp"
#include "wgame/image_io.hpp"
#include "wgame/morphology.hpp"
#include "wgame/parallel.hpp"
#include "wgame/report.hpp"
#include "wgame/resample.hpp"
#include "wgame/stability.hpp"
#include "wgame/synth.hpp"

namespace wgame::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  fs::path annotations;
  fs::path mask_dir;
  fs::path saliency_dir;
  fs::path images_dir;
  std::vector<fs::path> manifests;
  fs::path out;
  std::string format = "json";
  std::size_t dilate = KernelSpec::kDefaultSize;
  double small_threshold = 0.10;
  std::size_t pointing_tolerance = 0;
  std::uint64_t seed = 0;
  double scale_min = 0.75;
  double scale_max = 0.9;
  std::string negatives = "error";
  std::size_t workers = 1;
  std::vector<std::size_t> pairs;
  std::vector<std::int64_t> categories;
  bool exclude_crowd = false;
  bool make_crops = false;

  // synth
  std::size_t synth_images = 20;
  std::size_t synth_size = 128;
  std::size_t synth_shapes = 3;
  std::int64_t synth_classes = 3;
  double synth_sigma = 6.0;
  std::size_t synth_videos = 2;
  std::size_t synth_frames = 150;
  double synth_max_zoom = 1.5;
};

void require_dir(const fs::path& p, const char* flag) {
  if (p.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::is_directory(p)) throw ConfigError(std::string(flag) + " '" + p.string() + "' is not a directory");
}

void require_file(const fs::path& p, const char* flag) {
  if (p.empty()) throw ConfigError(std::string(flag) + " is required");
  if (!fs::is_regular_file(p)) throw ConfigError(std::string(flag) + " '" + p.string() + "' does not exist");
}

void require_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("--out is required");
  const auto parent = cfg.out.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("output directory '" + parent.string() + "' does not exist");
  }
}

NegativePolicy negative_policy(const RunConfig& cfg) {
  try {
    return parse_negative_policy(cfg.negatives);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

ReportFormat report_format(const RunConfig& cfg) {
  try {
    return parse_report_format(cfg.format);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

json base_metadata(const RunConfig& cfg) {
  // The worker count and output path are left out on purpose: reports must
  // not depend on either.
  return {{"command", cfg.command}, {"tool_version", WGAME_VERSION}, {"negatives", cfg.negatives}};
}

std::optional<fs::path> find_saliency(const fs::path& dir, const std::string& stem) {
  for (const char* ext : {".smap", ".png"}) {
    fs::path candidate = dir / (stem + ext);
    if (fs::is_regular_file(candidate)) return candidate;
  }
  return std::nullopt;
}

bool parse_int(std::string_view text, std::int64_t& out) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// ---------------------------------------------------------------------------
// weighting-game / pointing-game

struct AccuracyJob {
  std::int64_t image_id = 0;
  std::int64_t class_id = 0;
  std::optional<ClassAnnotationSet> annotations;
  fs::path mask_file;
};

std::vector<AccuracyJob> accuracy_jobs(const RunConfig& cfg) {
  std::vector<AccuracyJob> jobs;
  if (!cfg.annotations.empty()) {
    AnnotationOptions options;
    options.include_crowd = !cfg.exclude_crowd;
    if (!cfg.categories.empty()) {
      options.category_filter.emplace(cfg.categories.begin(), cfg.categories.end());
    }
    for (auto& set : parse_annotations(cfg.annotations, options)) {
      AccuracyJob job;
      job.image_id = set.image_id;
      job.class_id = set.class_id;
      job.annotations = std::move(set);
      jobs.push_back(std::move(job));
    }
    return jobs;
  }
  // {image_id}_{class_id}.png
  for (const auto& entry : fs::directory_iterator(cfg.mask_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const std::string stem = entry.path().stem().string();
    const auto sep = stem.rfind('_');
    AccuracyJob job;
    if (sep == std::string::npos || !parse_int(std::string_view(stem).substr(0, sep), job.image_id) ||
        !parse_int(std::string_view(stem).substr(sep + 1), job.class_id)) {
      std::cerr << "warning: ignoring mask with unexpected name " << entry.path() << "\n";
      continue;
    }
    if (!cfg.categories.empty() &&
        std::find(cfg.categories.begin(), cfg.categories.end(), job.class_id) == cfg.categories.end()) {
      continue;
    }
    job.mask_file = entry.path();
    jobs.push_back(std::move(job));
  }
  std::sort(jobs.begin(), jobs.end(), [](const AccuracyJob& a, const AccuracyJob& b) {
    return std::tie(a.image_id, a.class_id) < std::tie(b.image_id, b.class_id);
  });
  if (jobs.empty()) throw EmptyResult("no masks found in " + cfg.mask_dir.string());
  return jobs;
}

int run_accuracy(const RunConfig& cfg) {
  if (cfg.annotations.empty() == cfg.mask_dir.empty()) {
    throw ConfigError("exactly one of --annotations or --mask-dir is required");
  }
  if (!cfg.annotations.empty()) require_file(cfg.annotations, "--annotations");
  if (!cfg.mask_dir.empty()) require_dir(cfg.mask_dir, "--mask-dir");
  require_dir(cfg.saliency_dir, "--saliency-dir");
  require_out(cfg);
  const auto format = report_format(cfg);
  const auto policy = negative_policy(cfg);
  if (!(cfg.small_threshold >= 0.0 && cfg.small_threshold <= 1.0)) {
    throw ConfigError("--small-threshold must lie in [0, 1]");
  }
  EvaluationOptions options;
  try {
    options.kernel = KernelSpec(cfg.dilate);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  options.pointing_tolerance = cfg.pointing_tolerance;

  std::vector<AccuracyJob> jobs;
  try {
    jobs = accuracy_jobs(cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyDataset) throw EmptyResult(e.what());
    throw;
  }

  std::vector<std::optional<AccuracyRecord>> slots(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const AccuracyJob& job = jobs[i];
    const std::string stem = std::to_string(job.image_id) + "_" + std::to_string(job.class_id);
    const auto path = find_saliency(cfg.saliency_dir, stem);
    if (!path) return;
    SaliencyMap saliency = read_saliency(*path, policy);
    const BinaryMask mask = job.annotations ? class_union_mask(*job.annotations) : read_mask_png(job.mask_file);
    std::string provenance = "saliency=" + path->filename().string();
    if (saliency.dims() != mask.dims()) {
      provenance += "; resized " + std::to_string(saliency.height()) + "x" + std::to_string(saliency.width()) +
                    "->" + std::to_string(mask.height()) + "x" + std::to_string(mask.width());
      saliency = bilinear_resize(saliency, mask.dims());
    }
    AccuracyRecord record = evaluate_mask(saliency, mask, options);
    record.image_id = job.image_id;
    record.class_id = job.class_id;
    record.provenance = std::move(provenance);
    slots[i] = std::move(record);
  });

  ReportDocument doc;
  doc.kind = ReportKind::accuracy;
  doc.small_threshold = cfg.small_threshold;
  std::size_t missing = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (slots[i]) {
      doc.accuracy_records.push_back(std::move(*slots[i]));
    } else {
      ++missing;
      std::cerr << "warning: no saliency map for image " << jobs[i].image_id << " class "
                << jobs[i].class_id << "\n";
    }
  }
  if (missing > 0) std::cerr << "warning: " << missing << " of " << jobs.size() << " pairs skipped\n";
  if (doc.accuracy_records.empty()) throw EmptyResult("no (image, class) pair had a saliency map");

  doc.metadata = base_metadata(cfg);
  doc.metadata["saliency_dir"] = cfg.saliency_dir.string();
  if (!cfg.annotations.empty()) {
    doc.metadata["annotations"] = cfg.annotations.string();
    doc.metadata["include_crowd"] = !cfg.exclude_crowd;
  } else {
    doc.metadata["mask_dir"] = cfg.mask_dir.string();
  }
  doc.metadata["dilate"] = cfg.dilate;
  doc.metadata["small_threshold"] = cfg.small_threshold;
  doc.metadata["pointing_tolerance"] = cfg.pointing_tolerance;
  doc.metadata["categories"] = cfg.categories;
  doc.metadata["pairs_total"] = jobs.size();
  doc.metadata["pairs_missing_saliency"] = missing;
  write_report(doc, cfg.out, format);

  const auto summary = summarize_accuracy(doc.accuracy_records, cfg.small_threshold);
  const auto show = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("n/a"); };
  if (cfg.command == "pointing-game") {
    std::cout << "pointing hit rate " << show(summary.pointing_hit_rate) << " over "
              << summary.record_count << " pairs (" << summary.degenerate_count << " degenerate)\n";
  } else {
    std::cout << "weighting accuracy " << show(summary.mean_weighting) << " (small "
              << show(summary.small_mean_weighting) << ", n=" << summary.small_count << "; uniform baseline "
              << show(summary.mean_uniform_baseline) << ") over " << summary.record_count << " pairs ("
              << summary.degenerate_count << " degenerate)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// make-crops

RasterImage crop_image(const RasterImage& image, const CropSpec& crop) {
  RasterImage out{crop.out_dims(), image.channels, image.bit_depth, {}};
  out.samples.resize(out.dims.area() * out.channels);
  const double max_level = image.bit_depth == 16 ? 65535.0 : 255.0;
  for (std::size_t ch = 0; ch < image.channels; ++ch) {
    std::vector<double> plane(image.dims.area());
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = image.samples[i * image.channels + ch];
    const SaliencyMap cropped = apply_crop(SaliencyMap(image.dims, std::move(plane)), crop);
    const auto values = cropped.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      out.samples[i * out.channels + ch] =
          static_cast<std::uint16_t>(std::clamp(std::round(values[i]), 0.0, max_level));
    }
  }
  return out;
}

int run_make_crops(const RunConfig& cfg) {
  require_dir(cfg.images_dir, "--images");
  if (cfg.out.empty()) throw ConfigError("--out is required");
  if (!cfg.saliency_dir.empty()) require_dir(cfg.saliency_dir, "--saliency-dir");
  if (!(cfg.scale_min > 0.0 && cfg.scale_min <= cfg.scale_max && cfg.scale_max <= 1.0)) {
    throw ConfigError("scale bounds must satisfy 0 < --scale-min <= --scale-max <= 1");
  }
  const auto policy = negative_policy(cfg);

  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(cfg.images_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") images.push_back(entry.path());
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) throw EmptyResult("no PNG images in " + cfg.images_dir.string());

  fs::create_directories(cfg.out / "cropped");
  fs::create_directories(cfg.out / "transformed");
  if (!cfg.saliency_dir.empty()) fs::create_directories(cfg.out / "cropped_saliency");

  std::vector<json> entries(images.size());
  parallel_for(images.size(), cfg.workers, [&](std::size_t i) {
    const fs::path& image_path = images[i];
    const std::string stem = image_path.stem().string();
    const RasterImage image = read_png(image_path);
    const CropSpec crop = sample_crop(RngStream(cfg.seed, i), image.dims, cfg.scale_min, cfg.scale_max);
    write_png(crop_image(image, crop), cfg.out / "cropped" / (stem + ".png"));

    json entry = {{"id", stem},
                  {"class_id", 0},
                  {"image", fs::absolute(image_path).string()},
                  {"cropped_image", "cropped/" + stem + ".png"},
                  {"crop", crop_to_json(crop)},
                  {"transformed", "transformed/" + stem + ".smap"}};
    if (!cfg.saliency_dir.empty()) {
      if (const auto original = find_saliency(cfg.saliency_dir, stem)) {
        entry["original"] = fs::absolute(*original).string();
        write_saliency(apply_crop(read_saliency(*original, policy), crop),
                       cfg.out / "cropped_saliency" / (stem + ".smap"));
      }
    }
    if (!entry.contains("original")) entry["original"] = "original/" + stem + ".smap";
    entries[i] = std::move(entry);
  });

  const json manifest = {{"seed", cfg.seed},
                         {"scale_min", cfg.scale_min},
                         {"scale_max", cfg.scale_max},
                         {"entries", entries}};
  std::ofstream(cfg.out / "crop_manifest.json", std::ios::binary) << canonical_json(manifest);
  std::cout << "wrote " << images.size() << " crops and " << (cfg.out / "crop_manifest.json").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stability-crop / stability-frames

int run_stability_crop(const RunConfig& cfg) {
  if (cfg.make_crops) return run_make_crops(cfg);
  if (cfg.manifests.size() != 1) throw ConfigError("stability-crop needs exactly one --manifest");
  require_file(cfg.manifests.front(), "--manifest");
  require_out(cfg);
  const auto format = report_format(cfg);
  const auto policy = negative_policy(cfg);
  if (!(cfg.scale_min > 0.0 && cfg.scale_min <= cfg.scale_max && cfg.scale_max <= 1.0)) {
    throw ConfigError("scale bounds must satisfy 0 < --scale-min <= --scale-max <= 1");
  }

  const auto entries = parse_crop_manifest(cfg.manifests.front());
  if (entries.empty()) throw EmptyResult("crop manifest has no entries");
  CropBatchOptions options{cfg.seed, cfg.scale_min, cfg.scale_max, cfg.workers};
  const auto result = crop_stability_batch(
      entries, [policy](const fs::path& p) { return read_saliency(p, policy); }, options);

  ReportDocument doc;
  doc.kind = ReportKind::stability;
  doc.stability_records = result.records;
  doc.metadata = base_metadata(cfg);
  doc.metadata["manifest"] = cfg.manifests.front().string();
  doc.metadata["seed"] = cfg.seed;
  doc.metadata["scale_min"] = cfg.scale_min;
  doc.metadata["scale_max"] = cfg.scale_max;
  write_report(doc, cfg.out, format);

  const auto& s = result.summary;
  std::cout << "crop stability mean " << (s.mean_correlation ? format_double(*s.mean_correlation) : "n/a")
            << " over " << s.record_count << " entries (" << s.degenerate_count << " degenerate)\n";
  return kExitOk;
}

int run_stability_frames(const RunConfig& cfg) {
  if (cfg.manifests.empty()) throw ConfigError("stability-frames needs at least one --manifest");
  for (const auto& m : cfg.manifests) require_file(m, "--manifest");
  require_out(cfg);
  const auto format = report_format(cfg);
  const auto policy = negative_policy(cfg);

  std::vector<FrameSequenceManifest> manifests;
  for (const auto& m : cfg.manifests) {
    FrameSequenceManifest manifest = parse_frame_manifest(m);
    if (!cfg.pairs.empty()) {
      manifest.pair_starts = cfg.pairs;
      validate_frame_manifest(manifest);
    }
    manifests.push_back(std::move(manifest));
  }

  std::vector<FrameStabilityResult> results(manifests.size());
  parallel_for(manifests.size(), cfg.workers, [&](std::size_t i) {
    results[i] = frame_stability(manifests[i], [policy](const fs::path& p) { return read_saliency(p, policy); });
  });

  ReportDocument doc;
  doc.kind = ReportKind::stability;
  for (auto& r : results) {
    doc.stability_records.insert(doc.stability_records.end(), r.records.begin(), r.records.end());
  }
  if (doc.stability_records.empty()) throw EmptyResult("no frame pairs evaluated");
  doc.metadata = base_metadata(cfg);
  json manifest_paths = json::array();
  for (const auto& m : cfg.manifests) manifest_paths.push_back(m.string());
  doc.metadata["manifests"] = manifest_paths;
  doc.metadata["pairs"] = cfg.pairs.empty() ? json("default") : json(cfg.pairs);
  write_report(doc, cfg.out, format);

  const auto s = summarize_stability(doc.stability_records);
  std::cout << "frame stability pooled mean "
            << (s.mean_correlation ? format_double(*s.mean_correlation) : "n/a") << " over "
            << s.record_count << " pairs (" << s.degenerate_count << " degenerate)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

json synth_annotations(const std::vector<SyntheticScene>& scenes) {
  json images = json::array(), annotations = json::array(), categories = json::array();
  std::set<std::int64_t> classes;
  std::int64_t annotation_id = 1;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const auto image_id = static_cast<std::int64_t>(i + 1);
    images.push_back({{"id", image_id},
                      {"height", scenes[i].dims.height},
                      {"width", scenes[i].dims.width},
                      {"file_name", std::to_string(image_id) + ".png"}});
    for (const auto& shape : scenes[i].shapes) {
      classes.insert(shape.class_id);
      annotations.push_back({{"id", annotation_id++},
                             {"image_id", image_id},
                             {"category_id", shape.class_id},
                             {"iscrowd", 0},
                             {"segmentation", json::array({shape_polygon(shape)})}});
    }
  }
  for (auto c : classes) categories.push_back({{"id", c}, {"name", "class_" + std::to_string(c)}});
  return {{"images", images}, {"annotations", annotations}, {"categories", categories}};
}

int run_synth(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("--out is required");
  if (cfg.synth_images == 0) throw ConfigError("--images must be >= 1");
  if (cfg.synth_size < 8) throw ConfigError("--size must be >= 8");
  if (cfg.synth_frames < 2) throw ConfigError("--frames must be >= 2");
  if (!(cfg.synth_max_zoom > 1.0)) throw ConfigError("--max-zoom must exceed 1");
  if (!(cfg.synth_sigma > 0.0)) throw ConfigError("--sigma must be positive");
  if (!(cfg.scale_min > 0.0 && cfg.scale_min <= cfg.scale_max && cfg.scale_max <= 1.0)) {
    throw ConfigError("scale bounds must satisfy 0 < --scale-min <= --scale-max <= 1");
  }

  const Dims dims{cfg.synth_size, cfg.synth_size};
  const fs::path out = cfg.out;
  for (const char* sub : {"masks", "saliency", "crops/original", "crops/transformed", "frames"}) {
    fs::create_directories(out / sub);
  }

  // Scenes draw from the bit-inverted seed so crop streams (seed, ordinal)
  // stay identical to what stability-crop derives for manifest entries.
  const std::uint64_t scene_seed = ~cfg.seed;
  std::vector<SyntheticScene> scenes;
  for (std::size_t i = 0; i < cfg.synth_images; ++i) {
    scenes.push_back(random_scene(RngStream(scene_seed, i), dims, cfg.synth_shapes, cfg.synth_classes));
  }

  json crop_entries = json::array();
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const SyntheticScene& scene = scenes[i];
    const std::string image_id = std::to_string(i + 1);
    for (auto class_id : scene_classes(scene)) {
      const std::string stem = image_id + "_" + std::to_string(class_id);
      write_mask_png(scene_class_mask(scene, class_id), out / "masks" / (stem + ".png"));
      write_saliency(equivariant_saliency(scene, std::nullopt, {cfg.synth_sigma, class_id}),
                     out / "saliency" / (stem + ".smap"));
    }
    const CropSpec crop = sample_crop(RngStream(cfg.seed, i), dims, cfg.scale_min, cfg.scale_max);
    write_saliency(equivariant_saliency(scene, std::nullopt, {cfg.synth_sigma, std::nullopt}),
                   out / "crops/original" / (image_id + ".smap"));
    write_saliency(equivariant_saliency(scene, crop, {cfg.synth_sigma, std::nullopt}),
                   out / "crops/transformed" / (image_id + ".smap"));
    crop_entries.push_back({{"id", image_id},
                            {"class_id", scene.shapes.front().class_id},
                            {"original", "original/" + image_id + ".smap"},
                            {"transformed", "transformed/" + image_id + ".smap"},
                            {"crop", crop_to_json(crop)}});
  }
  std::ofstream(out / "annotations.json", std::ios::binary) << canonical_json(synth_annotations(scenes));
  std::ofstream(out / "crops/manifest.json", std::ios::binary)
      << canonical_json({{"seed", cfg.seed}, {"entries", crop_entries}});

  const auto zoom = synthesize_zoom_sequence(dims, cfg.synth_frames, cfg.synth_max_zoom);
  for (std::size_t v = 0; v < cfg.synth_videos; ++v) {
    const SyntheticScene scene =
        random_scene(RngStream(scene_seed, cfg.synth_images + v), dims, cfg.synth_shapes, cfg.synth_classes);
    const std::string subject = "video_" + std::to_string(v + 1);
    fs::create_directories(out / "frames" / subject);
    json frames = json::array();
    for (std::size_t k = 0; k < zoom.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%04zu.smap", k);
      write_saliency(equivariant_saliency(scene, zoom[k], {cfg.synth_sigma, std::nullopt}),
                     out / "frames" / subject / name);
      frames.push_back(subject + "/" + name);
    }
    std::ofstream(out / "frames" / (subject + ".json"), std::ios::binary)
        << canonical_json({{"subject_id", subject}, {"class_id", scene.shapes.front().class_id}, {"frames", frames}});
  }

  std::cout << "wrote " << scenes.size() << " scenes, " << cfg.synth_videos << " zoom sequences to "
            << out.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--out", cfg.out, "Output path");
  sub.add_option("--format", cfg.format, "Report format: json|csv")->check(CLI::IsMember({"json", "csv"}));
  sub.add_option("--negatives", cfg.negatives, "Signed saliency policy: error|clamp|abs")
      ->check(CLI::IsMember({"error", "clamp", "abs"}));
  sub.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
}

void add_crop_sampling(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--seed", cfg.seed, "Master seed for crop sampling");
  sub.add_option("--scale-min", cfg.scale_min, "Minimum crop area fraction");
  sub.add_option("--scale-max", cfg.scale_max, "Maximum crop area fraction");
}

void add_accuracy_options(CLI::App& sub, RunConfig& cfg) {
  add_common(sub, cfg);
  sub.add_option("--annotations", cfg.annotations, "COCO-schema annotation file");
  sub.add_option("--mask-dir", cfg.mask_dir, "Directory of {image_id}_{class_id}.png masks");
  sub.add_option("--saliency-dir", cfg.saliency_dir, "Directory of {image_id}_{class_id}.smap|.png maps");
  sub.add_option("--dilate", cfg.dilate, "Odd dilation kernel size (1 disables)");
  sub.add_option("--small-threshold", cfg.small_threshold, "Mask area fraction below which objects are small");
  sub.add_option("--pointing-tolerance", cfg.pointing_tolerance, "Pointing Game tolerance radius in pixels");
  sub.add_option("--categories", cfg.categories, "Restrict to these class ids")->delimiter(',');
  sub.add_flag("--exclude-crowd", cfg.exclude_crowd, "Drop iscrowd annotations");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Accuracy and stability metrics for saliency maps", "wgame"};
  app.require_subcommand(1);
  app.set_version_flag("--version", WGAME_VERSION);
  RunConfig cfg;

  auto* weighting = app.add_subcommand("weighting-game", "Mass of saliency inside the dilated class mask");
  add_accuracy_options(*weighting, cfg);
  auto* pointing = app.add_subcommand("pointing-game", "Does the saliency peak hit the class mask");
  add_accuracy_options(*pointing, cfg);

  auto* crop = app.add_subcommand("stability-crop", "Correlation of t(e(M)) against e(t(M))");
  add_common(*crop, cfg);
  add_crop_sampling(*crop, cfg);
  crop->add_option("--manifest", cfg.manifests, "Crop manifest JSON");
  crop->add_flag("--make-crops", cfg.make_crops, "Sample crops and emit inputs instead of evaluating");
  crop->add_option("--images", cfg.images_dir, "PNG images (with --make-crops)");
  crop->add_option("--saliency-dir", cfg.saliency_dir, "Original saliency maps (with --make-crops)");

  auto* frames = app.add_subcommand("stability-frames", "Correlation between consecutive video frames");
  add_common(*frames, cfg);
  frames->add_option("--manifest", cfg.manifests, "Frame sequence manifest JSON (repeatable)");
  frames->add_option("--pairs", cfg.pairs, "First frame of each consecutive pair")->delimiter(',');

  auto* make_crops = app.add_subcommand("make-crops", "Sample crops and write cropped inputs plus a manifest");
  add_common(*make_crops, cfg);
  add_crop_sampling(*make_crops, cfg);
  make_crops->add_option("--images", cfg.images_dir, "Directory of PNG images");
  make_crops->add_option("--saliency-dir", cfg.saliency_dir, "Optional original saliency maps ({stem}.smap)");

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset for end-to-end runs");
  synth->add_option("--out", cfg.out, "Output directory");
  add_crop_sampling(*synth, cfg);
  synth->add_option("--images", cfg.synth_images, "Number of scenes");
  synth->add_option("--size", cfg.synth_size, "Square image side in pixels");
  synth->add_option("--shapes", cfg.synth_shapes, "Shapes per scene");
  synth->add_option("--classes", cfg.synth_classes, "Number of class ids");
  synth->add_option("--sigma", cfg.synth_sigma, "Gaussian saliency sigma in pixels");
  synth->add_option("--videos", cfg.synth_videos, "Number of zoom sequences");
  synth->add_option("--frames", cfg.synth_frames, "Frames per zoom sequence");
  synth->add_option("--max-zoom", cfg.synth_max_zoom, "Zoom ratio at the sequence apex");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (weighting->parsed()) {
      cfg.command = "weighting-game";
      return run_accuracy(cfg);
    }
    if (pointing->parsed()) {
      cfg.command = "pointing-game";
      return run_accuracy(cfg);
    }
    if (crop->parsed()) {
      cfg.command = "stability-crop";
      return run_stability_crop(cfg);
    }
    if (frames->parsed()) {
      cfg.command = "stability-frames";
      return run_stability_frames(cfg);
    }
    if (make_crops->parsed()) {
      cfg.command = "make-crops";
      return run_make_crops(cfg);
    }
    cfg.command = "synth";
    return run_synth(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EmptyResult& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::EmptyDataset || e.code() == ErrorCode::EmptyAggregate) return kExitEmpty;
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace wgame::cli
