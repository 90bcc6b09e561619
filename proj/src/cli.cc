// Copyright 2026 The bgmix Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bgmix/cli.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "bgmix/curation.h"
#include "bgmix/dataset_io.h"
#include "bgmix/eval.h"
#include "bgmix/mix.h"
#include "bgmix/overlay.h"
#include "bgmix/parallel.h"
#include "bgmix/rng.h"

namespace bgmix {
namespace {

using nlohmann::json;

// Serializes all console output so worker logs never interleave mid-line.
class Console {
 public:
  Console(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void set_quiet(bool quiet) { quiet_ = quiet; }

  void info(const std::string& line) {
    if (quiet_) return;
    std::lock_guard lock(mu_);
    out_ << line << '\n';
  }
  void print(const std::string& text) {
    std::lock_guard lock(mu_);
    out_ << text;
  }
  void warn(const std::string& line) {
    std::lock_guard lock(mu_);
    err_ << "warning: " << line << '\n';
  }
  void error(const std::string& line) {
    std::lock_guard lock(mu_);
    err_ << "error: " << line << '\n';
  }

 private:
  std::mutex mu_;
  std::ostream& out_;
  std::ostream& err_;
  bool quiet_ = false;
};

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Trailing decimal digits of the file stem, e.g. frame_0000000123 -> 123.
ImageId frame_id_from_name(const fs::path& p) {
  const std::string stem = p.stem().string();
  std::size_t start = stem.size();
  while (start > 0 && std::isdigit(static_cast<unsigned char>(stem[start - 1]))) --start;
  if (start == stem.size()) {
    throw Error("frame file name has no numeric id: " + p.filename().string());
  }
  const std::string digits = stem.substr(start, 18);
  return std::stoll(digits);
}

void ensure_parent(const fs::path& file) {
  const fs::path parent = fs::absolute(file).parent_path();
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw Error("cannot create " + parent.string() + ": " + ec.message());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

std::string rel_to(const fs::path& target, const fs::path& base_dir) {
  return fs::absolute(target).lexically_normal()
      .lexically_relative(fs::absolute(base_dir).lexically_normal())
      .generic_string();
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) throw Error(what + " not found: " + p.string());
}

// ---------------------------------------------------------------- curate

struct CurateArgs {
  std::string frames;
  std::string images;
  std::string detections;
  double bg_threshold = kDefaultBackgroundThreshold;
  std::vector<int> categories{kHandCategory, kTargetObjectCategory};
  int every_nth = 1;
  std::string out;
};

int cmd_curate(const CurateArgs& args, Console& console) {
  require_file(args.frames, "frames");
  require_file(args.detections, "detections file");
  const fs::path out = args.out;
  const fs::path pool_dir = fs::absolute(out).parent_path();

  // Absolute location of each frame, and its pool-relative reference.
  struct Frame {
    fs::path file;
    FrameRef ref;
  };
  std::vector<Frame> frames;
  if (fs::is_directory(args.frames)) {
    for (const auto& p : list_images(args.frames)) {
      frames.push_back({p, {rel_to(p, pool_dir), frame_id_from_name(p)}});
    }
  } else {
    const DatasetManifest m = load_manifest(args.frames);
    const fs::path dir =
        args.images.empty() ? fs::path(args.frames).parent_path() : fs::path(args.images);
    for (const auto& img : m.images) {
      const fs::path p = dir / img.file_name;
      frames.push_back({p, {rel_to(p, pool_dir), img.id}});
    }
  }
  if (args.every_nth > 1) {
    std::vector<Frame> kept;
    for (std::size_t i = 0; i < frames.size(); i += args.every_nth) kept.push_back(frames[i]);
    frames = std::move(kept);
  }

  const DetectionSet dets = load_detections(args.detections, {});
  std::vector<FrameRef> refs;
  std::map<std::string, fs::path> file_of;
  for (const auto& f : frames) {
    refs.push_back(f.ref);
    file_of[f.ref.path] = f.file;
  }

  CurationOptions options;
  options.threshold = args.bg_threshold;
  options.categories = args.categories;
  options.source = fs::path(args.frames).generic_string();
  options.digest = [&](const FrameRef& r) { return sha256_file(file_of.at(r.path)); };
  const CurationResult result = curate_backgrounds(refs, dets.records, options);

  ensure_parent(out);
  write_pool(result.pool, out);
  fs::path echo = out;
  echo.replace_extension(".config.json");
  write_text_file(echo, canonical_dump({{"command", "curate"},
                                        {"frames", args.frames},
                                        {"images", args.images},
                                        {"detections", args.detections},
                                        {"bg-threshold", args.bg_threshold},
                                        {"categories", args.categories},
                                        {"every-nth", args.every_nth}}));
  // Validate what landed on disk.
  if (load_pool(out) != result.pool) throw Error("pool manifest failed to round-trip");

  console.info("frames in:   " + std::to_string(result.frames_in));
  console.info("frames kept: " + std::to_string(result.pool.entries.size()));
  console.info("rejected:    " + std::to_string(result.rejected));
  for (const auto& [cat, n] : result.rejected_by_category) {
    console.info("  category " + std::to_string(cat) + ": " + std::to_string(n));
  }
  if (result.unknown_detections > 0) {
    console.warn(std::to_string(result.unknown_detections) +
                 " detections reference no listed frame and were ignored");
  }
  if (result.empty_pool) console.warn("background pool is empty");
  return kExitOk;
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
  std::string manifest;
  std::string images;
  std::string pool;
  std::string external;
  std::string mode = "bg-mixup";
  double alpha = 1.0;
  double beta = 1.0;
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  int multiplicity = 1;
  std::string format = "png";
  int jpeg_quality = 95;
  std::string out;
  int workers = 1;
};

struct OutputSlot {
  AugmentedSample sample{ImageBuffer(1, 1), {}, {}};
  std::string file_name;
  std::string partner_digest;
};

LabeledImage load_labeled(const DatasetManifest& m, const ImageRecord& rec,
                          const fs::path& images_dir) {
  ImageBuffer img = decode_image(images_dir / rec.file_name);
  if (img.width() != rec.width || img.height() != rec.height) {
    throw Error("image " + rec.file_name + " decodes to " + std::to_string(img.width()) +
                "x" + std::to_string(img.height()) + " but the manifest says " +
                std::to_string(rec.width) + "x" + std::to_string(rec.height));
  }
  return LabeledImage{rec.id, std::move(img), m.annotations_for(rec.id)};
}

int cmd_augment(const AugmentArgs& args, Console& console) {
  MixConfig cfg;
  cfg.mode = parse_mix_mode(args.mode);
  cfg.alpha = args.alpha;
  cfg.beta = args.beta;
  cfg.master_seed = args.seed;
  cfg.lambda_override = args.lambda;
  cfg.validate();
  const ImageFormat format = parse_image_format(args.format);

  require_file(args.manifest, "manifest");
  const DatasetManifest m = load_manifest(args.manifest);
  if (m.clamp_warnings > 0) {
    console.warn(std::to_string(m.clamp_warnings) + " annotation boxes clamped to their image");
  }
  const fs::path images_dir =
      args.images.empty() ? fs::path(args.manifest).parent_path() : fs::path(args.images);

  BackgroundPool pool;
  fs::path pool_dir;
  std::vector<fs::path> externals;
  switch (cfg.mode) {
    case MixMode::kBackgroundMixup:
      if (args.pool.empty()) throw Error("--pool is required for bg-mixup");
      require_file(args.pool, "pool manifest");
      pool = load_pool(args.pool);
      pool_dir = fs::absolute(args.pool).parent_path();
      if (pool.empty()) throw Error("background pool " + args.pool + " is empty");
      break;
    case MixMode::kMixup:
      if (m.images.size() < 2) throw Error("mixup needs at least two images");
      break;
    case MixMode::kMixupExternal:
      if (args.external.empty()) throw Error("--external is required for mixup-external");
      externals = list_images(args.external);
      if (externals.empty()) throw Error("no images in " + args.external);
      break;
  }

  const fs::path out = args.out;
  ensure_dir(out / "images");
  const std::size_t n = m.images.size();
  const std::size_t total = n * static_cast<std::size_t>(args.multiplicity);
  std::vector<OutputSlot> slots(total);
  std::map<std::string, std::string> digest_of;
  for (const auto& e : pool.entries) digest_of[e.path] = e.digest;

  const ImageLoader load_background = [&](const std::string& entry) {
    return decode_image(pool_dir / entry);
  };

  parallel_for(total, args.workers, [&](std::size_t k) {
    const std::size_t i = k % n;
    const std::uint64_t seed = derive_seed(cfg.master_seed, k);
    Rng rng(seed);
    const LabeledImage sample = load_labeled(m, m.images[i], images_dir);
    OutputSlot& slot = slots[k];
    switch (cfg.mode) {
      case MixMode::kBackgroundMixup:
        slot.sample = background_mixup(sample, pool, cfg, rng, load_background);
        slot.partner_digest = digest_of[slot.sample.provenance.partner];
        break;
      case MixMode::kMixup: {
        std::uniform_int_distribution<std::size_t> pick(0, n - 2);
        std::size_t j = pick(rng);
        if (j >= i) ++j;
        const LabeledImage partner = load_labeled(m, m.images[j], images_dir);
        slot.sample = mixup_pair(sample, partner, cfg, rng);
        break;
      }
      case MixMode::kMixupExternal: {
        std::uniform_int_distribution<std::size_t> pick(0, externals.size() - 1);
        const fs::path& ext = externals[pick(rng)];
        slot.sample = mixup_external(sample, decode_image(ext), ext.filename().generic_string(),
                                     cfg, rng);
        break;
      }
    }
    slot.sample.provenance.sample_seed = seed;
    char name[32];
    std::snprintf(name, sizeof(name), "%08zu", k + 1);
    slot.file_name = std::string("images/") + name + image_format_extension(format);
    encode_image(slot.sample.image, out / slot.file_name, format, args.jpeg_quality);
    // Only the metadata is needed from here on.
    slot.sample.image = ImageBuffer(1, 1);
  });

  DatasetManifest result;
  result.categories = m.categories;
  json per_image = json::array();
  std::array<std::size_t, 10> histogram{};
  std::int64_t next_ann = 1;
  for (std::size_t k = 0; k < total; ++k) {
    const OutputSlot& slot = slots[k];
    const ImageRecord& src = m.images[k % n];
    const ImageId id = static_cast<ImageId>(k + 1);
    result.images.push_back({id, slot.file_name, src.width, src.height});
    for (Annotation a : slot.sample.annotations) {
      a.id = next_ann++;
      a.image_id = id;
      result.annotations.push_back(a);
    }
    const Provenance& p = slot.sample.provenance;
    json entry = {{"id", id},
                  {"file_name", slot.file_name},
                  {"sources", p.source_ids},
                  {"lambda", p.lambda},
                  {"seed", p.sample_seed}};
    switch (p.mode) {
      case MixMode::kBackgroundMixup:
        entry["background"] = p.partner;
        entry["background_digest"] = slot.partner_digest;
        break;
      case MixMode::kMixup:
        entry["partner_id"] = p.source_ids.at(1);
        break;
      case MixMode::kMixupExternal:
        entry["external"] = p.partner;
        break;
    }
    per_image.push_back(std::move(entry));
    histogram[std::min<std::size_t>(9, static_cast<std::size_t>(p.lambda * 10))]++;
  }

  write_manifest(result, out / "manifest.json");
  json provenance = {{"mode", mix_mode_name(cfg.mode)},
                     {"alpha", cfg.alpha},
                     {"beta", cfg.beta},
                     {"lambda_override", args.lambda ? json(*args.lambda) : json(nullptr)},
                     {"master_seed", cfg.master_seed},
                     {"multiplicity", args.multiplicity},
                     {"images", per_image}};
  write_text_file(out / "provenance.json", canonical_dump(provenance));
  write_text_file(out / "config.json",
                  canonical_dump({{"command", "augment"},
                                  {"manifest", args.manifest},
                                  {"images", args.images},
                                  {"pool", args.pool},
                                  {"external", args.external},
                                  {"mode", args.mode},
                                  {"alpha", args.alpha},
                                  {"beta", args.beta},
                                  {"lambda", args.lambda ? json(*args.lambda) : json(nullptr)},
                                  {"seed", args.seed},
                                  {"multiplicity", args.multiplicity},
                                  {"format", args.format},
                                  {"jpeg-quality", args.jpeg_quality}}));
  if (load_manifest(out / "manifest.json") != result) {
    throw Error("augmented manifest failed to round-trip");
  }

  console.info("wrote " + std::to_string(total) + " augmented images (" +
               std::string(mix_mode_name(cfg.mode)) + ") to " + out.string());
  console.info("lambda histogram:");
  for (std::size_t b = 0; b < histogram.size(); ++b) {
    char line[64];
    std::snprintf(line, sizeof(line), "  [%.1f, %.1f%c %zu", b / 10.0, (b + 1) / 10.0,
                  b == 9 ? ']' : ')', histogram[b]);
    console.info(line);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string detections;
  std::string manifest;
  double iou_thresh = kDefaultIouThreshold;
  double conf_thresh = kDefaultConfidenceThreshold;
  std::string interp = "all-point";
  std::vector<int> categories;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& args, Console& console) {
  require_file(args.manifest, "manifest");
  require_file(args.detections, "detections file");
  const DatasetManifest gt = load_manifest(args.manifest);
  const DetectionSet dets = load_detections(args.detections, gt.categories);
  EvalConfig config;
  config.iou_threshold = args.iou_thresh;
  config.conf_threshold = args.conf_thresh;
  config.interpolation = parse_interpolation(args.interp);
  config.categories = args.categories;
  const EvalReport report = evaluate(dets, gt, config);
  const std::string table = format_table(report);

  if (!args.out.empty()) {
    const fs::path out = args.out;
    ensure_dir(out);
    write_text_file(out / "report.json", canonical_dump(report_to_json(report)));
    write_text_file(out / "table.txt", table);
    write_text_file(out / "config.json",
                    canonical_dump({{"command", "evaluate"},
                                    {"detections", args.detections},
                                    {"manifest", args.manifest},
                                    {"iou-thresh", args.iou_thresh},
                                    {"conf-thresh", args.conf_thresh},
                                    {"interp", args.interp},
                                    {"categories", args.categories}}));
  }
  console.print(table);
  return kExitOk;
}

// ---------------------------------------------------------------- overlay

struct OverlayArgs {
  std::string manifest;
  std::string images;
  std::string detections;
  double conf_thresh = kDefaultConfidenceThreshold;
  bool no_gt = false;
  std::string out;
  int workers = 1;
};

int cmd_overlay(const OverlayArgs& args, Console& console) {
  require_file(args.manifest, "manifest");
  const DatasetManifest m = load_manifest(args.manifest);
  const fs::path images_dir =
      args.images.empty() ? fs::path(args.manifest).parent_path() : fs::path(args.images);
  for (const auto& rec : m.images) require_file(images_dir / rec.file_name, "image");

  std::map<ImageId, std::vector<BoundBox>> predicted;
  if (!args.detections.empty()) {
    require_file(args.detections, "detections file");
    for (const auto& r : load_detections(args.detections, m.categories).records) {
      if (r.score >= args.conf_thresh) predicted[r.image_id].push_back(r.box);
    }
  }
  const fs::path out = args.out;
  ensure_dir(out);
  parallel_for(m.images.size(), args.workers, [&](std::size_t i) {
    const ImageRecord& rec = m.images[i];
    ImageBuffer img = decode_image(images_dir / rec.file_name);
    if (!args.no_gt) {
      for (const auto& a : m.annotations_for(rec.id)) {
        draw_box_outline(img, a.box, kGroundTruthColor);
      }
    }
    if (auto it = predicted.find(rec.id); it != predicted.end()) {
      for (const auto& b : it->second) draw_box_outline(img, b, kPredictionColor);
    }
    encode_image(img, out / (fs::path(rec.file_name).stem().string() + ".png"),
                 ImageFormat::kPng);
  });
  write_text_file(out / "config.json",
                  canonical_dump({{"command", "overlay"},
                                  {"manifest", args.manifest},
                                  {"images", args.images},
                                  {"detections", args.detections},
                                  {"conf-thresh", args.conf_thresh},
                                  {"no-gt", args.no_gt}}));
  console.info("wrote " + std::to_string(m.images.size()) + " overlays to " + out.string());
  return kExitOk;
}

// ---------------------------------------------------------------- config file

// Splices `--config file.json` into the argument list: every key the command
// line does not set itself becomes `--key value`.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config_path.empty()) return args;

  const json cfg = read_json_file(config_path);
  if (!cfg.is_object()) throw CLI::ValidationError("--config", "config file must be a JSON object");
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (given(flag) || value.is_null()) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      if (value.empty()) continue;
      args.push_back(flag);
      for (const auto& v : value) args.push_back(scalar(v));
    } else if (value.is_string() && value.get<std::string>().empty()) {
      continue;
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Console console(out, err);
  CLI::App app{"bgmix: background mixup augmentation and hand-object detection evaluation",
               "bgmix"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only print warnings, errors and reports");
  int workers = default_worker_count();

  CurateArgs curate;
  auto* c = app.add_subcommand("curate", "Select foreground-free frames into a background pool");
  c->add_option("--frames", curate.frames, "Frame directory or COCO manifest")->required();
  c->add_option("--images", curate.images, "Image directory when --frames is a manifest");
  c->add_option("--detections", curate.detections, "Detector output on the frames")->required();
  c->add_option("--bg-threshold", curate.bg_threshold, "Score at which a detection disqualifies")
      ->check(CLI::Range(0.0, 1.0));
  c->add_option("--categories", curate.categories, "Category ids that disqualify a frame");
  c->add_option("--every-nth", curate.every_nth, "Keep every Nth frame before filtering")
      ->check(CLI::PositiveNumber);
  c->add_option("--out", curate.out, "Pool manifest to write")->required();
  c->add_option("--workers", workers, "Unused by curate")->check(CLI::PositiveNumber);

  AugmentArgs augment;
  double lambda = 0.0;
  auto* a = app.add_subcommand("augment", "Write an augmented copy of a dataset");
  a->add_option("--manifest", augment.manifest, "COCO manifest of the training set")->required();
  a->add_option("--images", augment.images, "Image directory (default: manifest directory)");
  a->add_option("--mode", augment.mode, "Mixing mode")
      ->check(CLI::IsMember({"bg-mixup", "mixup", "mixup-external"}));
  a->add_option("--pool", augment.pool, "Background pool manifest (bg-mixup)");
  a->add_option("--external", augment.external, "Directory of unlabeled images (mixup-external)");
  a->add_option("--alpha", augment.alpha, "Beta distribution shape alpha")
      ->check(CLI::PositiveNumber);
  a->add_option("--beta", augment.beta, "Beta distribution shape beta")
      ->check(CLI::PositiveNumber);
  auto* lambda_opt =
      a->add_option("--lambda", lambda, "Fixed mixing weight")->check(CLI::Range(0.0, 1.0));
  a->add_option("--seed", augment.seed, "Master seed");
  a->add_option("--multiplicity", augment.multiplicity, "Outputs per input image")
      ->check(CLI::PositiveNumber);
  a->add_option("--format", augment.format, "Output image format")
      ->check(CLI::IsMember({"png", "jpeg"}));
  a->add_option("--jpeg-quality", augment.jpeg_quality, "JPEG quality")
      ->check(CLI::Range(1, 100));
  a->add_option("--out", augment.out, "Output directory")->required();
  a->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  EvaluateArgs evaluate_args;
  auto* e = app.add_subcommand("evaluate", "Score detections against ground truth");
  e->add_option("--detections", evaluate_args.detections, "Detection results JSON")->required();
  e->add_option("--manifest", evaluate_args.manifest, "Ground-truth COCO manifest")->required();
  e->add_option("--iou-thresh", evaluate_args.iou_thresh, "IoU needed for a match")
      ->check(CLI::Range(0.0, 1.0));
  e->add_option("--conf-thresh", evaluate_args.conf_thresh, "Score cutoff for precision")
      ->check(CLI::Range(0.0, 1.0));
  e->add_option("--interp", evaluate_args.interp, "AP interpolation")
      ->check(CLI::IsMember({"all-point", "voc11"}));
  e->add_option("--categories", evaluate_args.categories, "Category ids to report");
  e->add_option("--out", evaluate_args.out, "Directory for report.json and table.txt");
  e->add_option("--workers", workers, "Unused by evaluate")->check(CLI::PositiveNumber);

  OverlayArgs overlay;
  auto* o = app.add_subcommand("overlay", "Draw ground truth and predictions onto images");
  o->add_option("--manifest", overlay.manifest, "COCO manifest listing the images")->required();
  o->add_option("--images", overlay.images, "Image directory (default: manifest directory)");
  o->add_option("--detections", overlay.detections, "Detection results JSON");
  o->add_option("--conf-thresh", overlay.conf_thresh, "Minimum score of drawn predictions")
      ->check(CLI::Range(0.0, 1.0));
  o->add_flag("--no-gt", overlay.no_gt, "Skip ground-truth boxes");
  o->add_option("--out", overlay.out, "Output directory")->required();
  o->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, out, err);
    return kExitUsage;
  } catch (const Error& ex) {
    console.error(ex.what());
    return kExitUsage;
  }
  console.set_quiet(quiet);

  try {
    if (c->parsed()) return cmd_curate(curate, console);
    if (a->parsed()) {
      if (lambda_opt->count() > 0) augment.lambda = lambda;
      augment.workers = workers;
      return cmd_augment(augment, console);
    }
    if (e->parsed()) return cmd_evaluate(evaluate_args, console);
    if (o->parsed()) {
      overlay.workers = workers;
      return cmd_overlay(overlay, console);
    }
  } catch (const std::exception& ex) {
    console.error(ex.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace bgmix
