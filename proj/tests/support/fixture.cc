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

#include "support/fixture.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <random>
#include <vector>

#include "json.hpp"

#include "bgmix/core.h"
#include "bgmix/dataset_io.h"
#include "bgmix/overlay.h"
#include "bgmix/rng.h"

namespace bgmix::testing {
namespace {

using nlohmann::json;

void fill_rect(ImageBuffer& img, int x, int y, int w, int h, Rgb color) {
  for (int yy = std::max(0, y); yy < std::min(img.height(), y + h); ++yy) {
    for (int xx = std::max(0, x); xx < std::min(img.width(), x + w); ++xx) {
      for (int c = 0; c < 3; ++c) img.set(xx, yy, c, color[c]);
    }
  }
}

ImageBuffer textured(int w, int h, Rng& rng) {
  ImageBuffer img(w, h);
  std::uniform_int_distribution<int> base(40, 200);
  const int r = base(rng), g = base(rng), b = base(rng);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int ripple = ((x / 4 + y / 4) % 2) * 12;
      img.set(x, y, 0, static_cast<std::uint8_t>(r + ripple));
      img.set(x, y, 1, static_cast<std::uint8_t>(g + ripple));
      img.set(x, y, 2, static_cast<std::uint8_t>(b));
    }
  }
  return img;
}

constexpr Rgb kSkin{224, 172, 140};
constexpr Rgb kObject{40, 80, 220};

}  // namespace

FixtureLayout write_synthetic_fixture(const fs::path& root, std::uint64_t seed) {
  FixtureLayout l;
  l.root = root;
  l.images_dir = root / "train";
  l.train_manifest = l.images_dir / "train.json";
  l.frames_dir = root / "frames";
  l.frame_detections = root / "frame_detections.json";
  l.external_dir = root / "external";
  l.predictions = root / "predictions.json";
  for (const auto& d : {l.images_dir, l.frames_dir, l.external_dir}) fs::create_directories(d);

  Rng rng(seed);
  json images = json::array();
  json annotations = json::array();
  json predictions = json::array();
  std::int64_t ann_id = 1;
  for (int i = 0; i < kFixtureImages; ++i) {
    const int w = i % 2 == 0 ? 64 : 80;
    const int h = i % 2 == 0 ? 48 : 60;
    ImageBuffer img = textured(w, h, rng);
    const int id = i + 1;
    const std::string name = "img_" + std::to_string(id) + ".png";
    images.push_back({{"id", id}, {"file_name", name}, {"width", w}, {"height", h}});

    std::uniform_int_distribution<int> px(0, w / 2), py(0, h / 2);
    const int boxes = 1 + i % 3;
    for (int k = 0; k < boxes; ++k) {
      const int cat = k == 0 ? kHandCategory : kTargetObjectCategory;
      const int bx = px(rng), by = py(rng);
      const int bw = 8 + (i + k) % 10, bh = 6 + (i * 3 + k) % 9;
      fill_rect(img, bx, by, bw, bh, cat == kHandCategory ? kSkin : kObject);
      const json box = json::array({bx, by, bw, bh});
      annotations.push_back(
          {{"id", ann_id++}, {"image_id", id}, {"category_id", cat}, {"bbox", box}});
      // A near-perfect detection for every box, plus a stray false positive
      // on every fourth image.
      predictions.push_back({{"image_id", id},
                             {"category_id", cat},
                             {"bbox", json::array({bx + 1, by, bw, bh})},
                             {"score", 0.5 + 0.03 * ((i + k) % 15)}});
    }
    if (i % 4 == 0) {
      predictions.push_back({{"image_id", id},
                             {"category_id", kHandCategory},
                             {"bbox", json::array({w - 10, h - 10, 9, 9})},
                             {"score", 0.3}});
    }
    encode_image(img, l.images_dir / name, ImageFormat::kPng);
  }
  json manifest = {{"images", images},
                   {"annotations", annotations},
                   {"categories", {{{"id", 1}, {"name", "hand"}}, {{"id", 2}, {"name", "targetobject"}}}}};
  write_text_file(l.train_manifest, canonical_dump(manifest));
  write_text_file(l.predictions, canonical_dump(predictions));

  json frame_dets = json::array();
  for (int f = 1; f <= kFixtureFrames; ++f) {
    ImageBuffer frame = textured(96, 72, rng);
    if (f % 3 == 1) {
      fill_rect(frame, 20, 20, 16, 12, kSkin);
      frame_dets.push_back({{"image_id", f},
                            {"category_id", kHandCategory},
                            {"bbox", json::array({20, 20, 16, 12})},
                            {"score", 0.9}});
    }
    if (f == 2) {
      // Below the default threshold: the frame stays a background.
      frame_dets.push_back({{"image_id", f},
                            {"category_id", kTargetObjectCategory},
                            {"bbox", json::array({5, 5, 10, 10})},
                            {"score", 0.05}});
    }
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%010d.png", f);
    encode_image(frame, l.frames_dir / name, ImageFormat::kPng);
  }
  write_text_file(l.frame_detections, canonical_dump(frame_dets));

  for (int e = 0; e < 4; ++e) {
    encode_image(textured(50 + 10 * e, 40, rng),
                 l.external_dir / ("ext_" + std::to_string(e) + ".png"), ImageFormat::kPng);
  }
  return l;
}

std::string tree_digest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::uint8_t> all;
  for (const auto& f : files) {
    const std::string rel = f.lexically_relative(dir).generic_string();
    all.insert(all.end(), rel.begin(), rel.end());
    all.push_back(0);
    const std::string d = sha256_file(f);
    all.insert(all.end(), d.begin(), d.end());
  }
  return sha256_hex(all);
}

fs::path make_temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() /
                       ("bgmix_" + tag + "_" + std::to_string(rd()) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace bgmix::testing
