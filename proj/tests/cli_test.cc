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

#include <sstream>

#include "doctest.h"

#include "bgmix/cli.h"
#include "bgmix/dataset_io.h"
#include "bgmix/eval.h"
#include "support/fixture.h"
#include "support/oracles.h"

namespace bgmix {
namespace {

using nlohmann::json;
using testing::FixtureLayout;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct CliFixture {
  CliFixture() : dir(testing::make_temp_dir("cli")), fx(testing::write_synthetic_fixture(dir / "data")) {}
  ~CliFixture() { fs::remove_all(dir); }

  std::string p(const fs::path& x) const { return x.string(); }
  fs::path curate_pool() {
    const fs::path pool = dir / "pool" / "pool.json";
    const Run r = run({"curate", "--frames", p(fx.frames_dir), "--detections",
                       p(fx.frame_detections), "--out", p(pool)});
    REQUIRE(r.code == 0);
    return pool;
  }

  fs::path dir;
  FixtureLayout fx;
};

TEST_CASE_FIXTURE(CliFixture, "curate keeps frames without confident detections") {
  const fs::path pool_path = curate_pool();
  const BackgroundPool pool = load_pool(pool_path);
  CHECK(pool.entries.size() == testing::kFixtureFrames - testing::kFixtureForegroundFrames);
  for (const auto& e : pool.entries) {
    CHECK(e.source_id % 3 != 1);
    CHECK(e.digest == sha256_file(pool_path.parent_path() / e.path));
  }
  CHECK(fs::exists(dir / "pool" / "pool.config.json"));

  // Rerun gives the same bytes.
  const auto first = read_binary_file(pool_path);
  curate_pool();
  CHECK(read_binary_file(pool_path) == first);
}

TEST_CASE_FIXTURE(CliFixture, "curate summary and small fixture") {
  // Three frames, two with confident detections.
  const fs::path frames = dir / "three";
  fs::create_directories(frames);
  for (int i = 1; i <= 3; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%010d.png", i);
    fs::copy_file(fx.frames_dir / name, frames / name);
  }
  write_text_file(dir / "dets.json", R"([
    {"image_id": 1, "category_id": 1, "bbox": [1, 1, 4, 4], "score": 0.8},
    {"image_id": 3, "category_id": 2, "bbox": [1, 1, 4, 4], "score": 0.4}])");
  const Run r = run({"curate", "--frames", p(frames), "--detections", p(dir / "dets.json"),
                     "--out", p(dir / "p3.json")});
  CHECK(r.code == 0);
  CHECK(load_pool(dir / "p3.json").entries.size() == 1);
  CHECK(r.out.find("frames kept: 1") != std::string::npos);
}

TEST_CASE_FIXTURE(CliFixture, "curate failures") {
  const Run missing = run({"curate", "--frames", p(fx.frames_dir), "--detections",
                           p(dir / "nope.json"), "--out", p(dir / "x.json")});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("nope.json") != std::string::npos);

  const Run bad_arg = run({"curate", "--frames", p(fx.frames_dir), "--detections",
                           p(fx.frame_detections), "--out", p(dir / "x.json"),
                           "--bg-threshold", "1.5"});
  CHECK(bad_arg.code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);

  // Empty pool is a warning, not a failure.
  write_text_file(dir / "all.json", [&] {
    json a = json::array();
    for (int i = 1; i <= testing::kFixtureFrames; ++i) {
      a.push_back({{"image_id", i}, {"category_id", 1}, {"bbox", {0, 0, 4, 4}}, {"score", 0.5}});
    }
    return a.dump();
  }());
  const Run empty = run({"curate", "--frames", p(fx.frames_dir), "--detections",
                         p(dir / "all.json"), "--out", p(dir / "empty.json")});
  CHECK(empty.code == 0);
  CHECK(empty.err.find("empty") != std::string::npos);

  // Augmenting from it fails.
  const Run aug = run({"augment", "--manifest", p(fx.train_manifest), "--pool",
                       p(dir / "empty.json"), "--out", p(dir / "aug")});
  CHECK(aug.code == 1);
}

TEST_CASE_FIXTURE(CliFixture, "curate every-nth and manifest frames") {
  const Run r = run({"curate", "--frames", p(fx.frames_dir), "--detections",
                     p(fx.frame_detections), "--every-nth", "3", "--out", p(dir / "nth.json")});
  REQUIRE(r.code == 0);
  // Frames 1, 4, 7, 10 are kept by subsampling and all carry a hand.
  CHECK(load_pool(dir / "nth.json").entries.empty());

  const Run m = run({"curate", "--frames", p(fx.train_manifest), "--detections",
                     p(fx.predictions), "--out", p(dir / "from_manifest.json")});
  REQUIRE(m.code == 0);
  CHECK(load_pool(dir / "from_manifest.json").entries.empty());
}

TEST_CASE_FIXTURE(CliFixture, "augment in every mode") {
  const fs::path pool = curate_pool();
  const DatasetManifest src = load_manifest(fx.train_manifest);

  SUBCASE("bg-mixup keeps annotations") {
    const Run r = run({"augment", "--manifest", p(fx.train_manifest), "--pool", p(pool),
                       "--seed", "5", "--out", p(dir / "bg")});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("lambda histogram") != std::string::npos);
    const DatasetManifest out = load_manifest(dir / "bg" / "manifest.json");
    CHECK(out.images.size() == src.images.size());
    CHECK(out.annotations.size() == src.annotations.size());
    for (std::size_t i = 0; i < src.images.size(); ++i) {
      const auto a = src.annotations_for(src.images[i].id);
      const auto b = out.annotations_for(out.images[i].id);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].box == b[k].box);
        CHECK(a[k].category_id == b[k].category_id);
      }
      const ImageBuffer img = decode_image(dir / "bg" / out.images[i].file_name);
      CHECK(img.width() == src.images[i].width);
    }
    const json prov = read_json_file(dir / "bg" / "provenance.json");
    CHECK(prov["mode"] == "bg-mixup");
    CHECK(prov["images"].size() == src.images.size());
    CHECK(prov["images"][0].contains("background"));
    CHECK(prov["images"][0]["background_digest"].get<std::string>().size() == 64);
  }
  SUBCASE("mixup sums source annotations") {
    const Run r = run({"augment", "--manifest", p(fx.train_manifest), "--mode", "mixup",
                       "--out", p(dir / "mx")});
    REQUIRE(r.code == 0);
    const DatasetManifest out = load_manifest(dir / "mx" / "manifest.json");
    const json prov = read_json_file(dir / "mx" / "provenance.json");
    CHECK(out.images.size() == src.images.size());
    for (std::size_t i = 0; i < out.images.size(); ++i) {
      const auto& entry = prov["images"][i];
      const ImageId a = entry["sources"][0], b = entry["sources"][1];
      CHECK(a != b);
      CHECK(out.annotations_for(out.images[i].id).size() ==
            src.annotations_for(a).size() + src.annotations_for(b).size());
    }
  }
  SUBCASE("mixup-external keeps only sample labels") {
    const Run r = run({"augment", "--manifest", p(fx.train_manifest), "--mode", "mixup-external",
                       "--external", p(fx.external_dir), "--lambda", "0.6", "--out", p(dir / "ext")});
    REQUIRE(r.code == 0);
    const DatasetManifest out = load_manifest(dir / "ext" / "manifest.json");
    CHECK(out.annotations.size() == src.annotations.size());
    const json prov = read_json_file(dir / "ext" / "provenance.json");
    CHECK(prov["images"][3]["lambda"] == 0.6);
    CHECK(prov["lambda_override"] == 0.6);
  }
  SUBCASE("multiplicity and jpeg") {
    const Run r = run({"augment", "--manifest", p(fx.train_manifest), "--pool", p(pool),
                       "--multiplicity", "2", "--format", "jpeg", "--out", p(dir / "m2")});
    REQUIRE(r.code == 0);
    const DatasetManifest out = load_manifest(dir / "m2" / "manifest.json");
    CHECK(out.images.size() == 2 * src.images.size());
    CHECK(out.annotations.size() == 2 * src.annotations.size());
    CHECK(fs::path(out.images[0].file_name).extension() == ".jpg");
  }
  SUBCASE("argument errors") {
    CHECK(run({"augment", "--manifest", p(fx.train_manifest), "--out", p(dir / "z")}).code == 1);
    CHECK(run({"augment", "--manifest", p(fx.train_manifest), "--pool", p(pool), "--alpha", "0",
               "--out", p(dir / "z")}).code == 2);
    CHECK(run({"augment", "--manifest", p(fx.train_manifest), "--mode", "cutmix", "--out",
               p(dir / "z")}).code == 2);
  }
}

TEST_CASE_FIXTURE(CliFixture, "augment is reproducible and schedule independent") {
  const fs::path pool = curate_pool();
  auto go = [&](const std::string& name, const std::string& workers) {
    const Run r = run({"augment", "--manifest", p(fx.train_manifest), "--pool", p(pool),
                       "--seed", "99", "--workers", workers, "--out", p(dir / name)});
    REQUIRE(r.code == 0);
    return testing::tree_digest(dir / name);
  };
  const std::string a = go("w1", "1");
  CHECK(go("w8", "8") == a);
  CHECK(go("w1_again", "1") == a);
  // A different seed changes the tree.
  const Run r = run({"augment", "--manifest", p(fx.train_manifest), "--pool", p(pool), "--seed",
                     "100", "--out", p(dir / "other")});
  REQUIRE(r.code == 0);
  CHECK(testing::tree_digest(dir / "other") != a);
}

TEST_CASE_FIXTURE(CliFixture, "config file supplies flags, command line wins") {
  const fs::path pool = curate_pool();
  write_text_file(dir / "cfg.json",
                  json{{"manifest", p(fx.train_manifest)}, {"pool", p(pool)}, {"seed", 3},
                       {"lambda", 0.25}, {"out", p(dir / "from_cfg")}}.dump());
  Run r = run({"augment", "--config", p(dir / "cfg.json"), "--lambda", "0.5"});
  REQUIRE(r.code == 0);
  json prov = read_json_file(dir / "from_cfg" / "provenance.json");
  CHECK(prov["master_seed"] == 3);
  CHECK(prov["images"][0]["lambda"] == 0.5);

  // The resolved-config echo reruns the same job.
  const json echo = read_json_file(dir / "from_cfg" / "config.json");
  CHECK(echo["lambda"] == 0.5);
  json rerun = echo;
  rerun["out"] = p(dir / "rerun");
  write_text_file(dir / "rerun.json", rerun.dump());
  r = run({"augment", "--config", p(dir / "rerun.json")});
  REQUIRE(r.code == 0);
  CHECK(testing::tree_digest(dir / "rerun") == testing::tree_digest(dir / "from_cfg"));

  write_text_file(dir / "junk.json", json{{"no-such-flag", 1}}.dump());
  CHECK(run({"augment", "--config", p(dir / "junk.json")}).code == 2);
}

TEST_CASE_FIXTURE(CliFixture, "evaluate") {
  SUBCASE("perfect predictions") {
    const DatasetManifest gt = load_manifest(fx.train_manifest);
    json perfect = json::array();
    for (const auto& a : gt.annotations) {
      perfect.push_back({{"image_id", a.image_id}, {"category_id", a.category_id},
                         {"bbox", {a.box.x(), a.box.y(), a.box.w(), a.box.h()}}, {"score", 0.9}});
    }
    write_text_file(dir / "perfect.json", perfect.dump());
    const Run r = run({"evaluate", "--detections", p(dir / "perfect.json"), "--manifest",
                       p(fx.train_manifest), "--out", p(dir / "eval")});
    REQUIRE(r.code == 0);
    // hand AP, obj AP, mAP and both precisions.
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = r.out.find("100.0", pos)) != std::string::npos; ++pos) ++count;
    CHECK(count == 5);
    CHECK(fs::exists(dir / "eval" / "report.json"));
    CHECK(read_binary_file(dir / "eval" / "table.txt").size() == r.out.size());
  }
  SUBCASE("empty detections") {
    write_text_file(dir / "none.json", "[]");
    const Run r = run({"evaluate", "--detections", p(dir / "none.json"), "--manifest",
                       p(fx.train_manifest), "--out", p(dir / "eval")});
    REQUIRE(r.code == 0);
    const json rep = read_json_file(dir / "eval" / "report.json");
    CHECK(rep["per_category"]["hand"]["ap"] == 0.0);
    CHECK(rep["per_category"]["hand"]["precision"].is_null());
    CHECK(rep["map"] == 0.0);
  }
  SUBCASE("fixture predictions match the oracle") {
    const Run r = run({"evaluate", "--detections", p(fx.predictions), "--manifest",
                       p(fx.train_manifest), "--out", p(dir / "eval")});
    REQUIRE(r.code == 0);
    const json rep = read_json_file(dir / "eval" / "report.json");
    const DatasetManifest gt = load_manifest(fx.train_manifest);
    const DetectionSet d = load_detections(fx.predictions, gt.categories);
    for (const auto& cat : gt.categories) {
      std::vector<oracle::GridPred> preds;
      std::vector<oracle::GridGt> gts;
      auto grid = [](const BoundBox& b) {
        return oracle::GridBox{static_cast<int>(b.x()), static_cast<int>(b.y()),
                               static_cast<int>(b.w()), static_cast<int>(b.h())};
      };
      for (const auto& x : d.records) {
        if (x.category_id == cat.id) preds.push_back({x.image_id, grid(x.box), x.score});
      }
      for (const auto& a : gt.annotations) {
        if (a.category_id == cat.id) gts.push_back({a.id, a.image_id, grid(a.box)});
      }
      const auto flags = oracle::greedy_flags(preds, gts, 0.5);
      CHECK(rep["per_category"][cat.name]["ap"].get<double>() ==
            doctest::Approx(oracle::brute_force_ap(flags, gts.size())).epsilon(1e-9));
      const auto prec = oracle::brute_force_precision(flags, oracle::sorted_scores(preds), 0.1);
      CHECK(rep["per_category"][cat.name]["precision"].get<double>() ==
            doctest::Approx(*prec).epsilon(1e-9));
    }
  }
  SUBCASE("schema mismatch") {
    write_text_file(dir / "cat.json",
                    R"([{"image_id": 1, "category_id": 5, "bbox": [0, 0, 4, 4], "score": 0.5}])");
    CHECK(run({"evaluate", "--detections", p(dir / "cat.json"), "--manifest",
               p(fx.train_manifest)}).code == 1);
  }
}

TEST_CASE_FIXTURE(CliFixture, "overlay draws only box perimeters") {
  DatasetManifest one;
  one.categories = default_categories();
  one.images = {{1, "img_1.png", 64, 48}};
  write_manifest(one, fx.images_dir / "one.json");
  write_text_file(dir / "dets.json", R"([
    {"image_id": 1, "category_id": 1, "bbox": [10, 8, 12, 9], "score": 0.5},
    {"image_id": 1, "category_id": 1, "bbox": [30, 30, 5, 5], "score": 0.05},
    {"image_id": 1, "category_id": 2, "bbox": [50, 40, 30, 30], "score": 0.9}])");
  const Run r = run({"overlay", "--manifest", p(fx.images_dir / "one.json"), "--detections",
                     p(dir / "dets.json"), "--out", p(dir / "ov")});
  REQUIRE(r.code == 0);
  const ImageBuffer before = decode_image(fx.images_dir / "img_1.png");
  const ImageBuffer after = decode_image(dir / "ov" / "img_1.png");
  auto on_edge = [](int x, int y, int x0, int y0, int x1, int y1) {
    const bool inside = x >= x0 && x <= x1 && y >= y0 && y <= y1;
    return inside && (x == x0 || x == x1 || y == y0 || y == y1);
  };
  int changed = 0;
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) {
      bool diff = false;
      for (int c = 0; c < 3; ++c) diff |= before.at(x, y, c) != after.at(x, y, c);
      if (!diff) continue;
      ++changed;
      // The 0.05 box is filtered; the second box runs off the image.
      CHECK((on_edge(x, y, 10, 8, 21, 16) || on_edge(x, y, 50, 40, 79, 69)));
      CHECK(after.at(x, y, 0) == 255);
    }
  }
  CHECK(changed > 0);
  CHECK(run({"overlay", "--manifest", p(fx.images_dir / "one.json"), "--images",
             p(dir / "nowhere"), "--out", p(dir / "ov2")}).code == 1);
}

}  // namespace
}  // namespace bgmix
