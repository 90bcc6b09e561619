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

#include <map>
#include <random>
#include <set>

#include "doctest.h"

#include "bgmix/curation.h"

namespace bgmix {
namespace {

std::vector<FrameRef> frames(std::initializer_list<const char*> names) {
  std::vector<FrameRef> out;
  ImageId id = 1;
  for (const char* n : names) out.push_back({n, id++});
  return out;
}

std::set<std::string> paths(const BackgroundPool& pool) {
  std::set<std::string> s;
  for (const auto& e : pool.entries) s.insert(e.path);
  return s;
}

DetectionRecord det(ImageId id, int cat, double score) {
  return {id, cat, BoundBox(0, 0, 4, 4), score};
}

TEST_CASE("curation keeps frames without confident foreground") {
  const auto f = frames({"A", "B", "C"});
  const std::vector<DetectionRecord> d{det(2, kHandCategory, 0.6),
                                       det(3, kTargetObjectCategory, 0.05)};
  const CurationResult r = curate_backgrounds(f, d, {});
  CHECK(paths(r.pool) == std::set<std::string>{"A", "C"});
  CHECK(r.rejected == 1);
  CHECK(r.rejected_by_category.at(kHandCategory) == 1);
  CHECK_FALSE(r.empty_pool);
  CHECK(r.pool.curation.threshold == 0.1);
  CHECK(r.pool.curation.categories == std::vector<int>{1, 2});
}

TEST_CASE("curation with no detections keeps everything") {
  const CurationResult r = curate_backgrounds(frames({"A", "B"}), {}, {});
  CHECK(paths(r.pool) == std::set<std::string>{"A", "B"});
}

TEST_CASE("a score equal to the threshold counts as present") {
  const std::vector<DetectionRecord> d{det(1, kHandCategory, 0.1)};
  const CurationResult r = curate_backgrounds(frames({"A"}), d, {});
  CHECK(r.pool.entries.empty());
  CHECK(r.empty_pool);
}

TEST_CASE("curation errors and warnings") {
  CHECK_THROWS_AS(curate_backgrounds({}, {}, {}), Error);
  CurationOptions bad;
  bad.threshold = 1.5;
  CHECK_THROWS_AS(curate_backgrounds(frames({"A"}), {}, bad), Error);
  std::vector<FrameRef> dup{{"A", 1}, {"A", 2}};
  CHECK_THROWS_AS(curate_backgrounds(dup, {}, {}), Error);

  const std::vector<DetectionRecord> d{det(42, kHandCategory, 0.9)};
  const CurationResult r = curate_backgrounds(frames({"A"}), d, {});
  CHECK(r.unknown_detections == 1);
  CHECK(r.pool.entries.size() == 1);
}

TEST_CASE("categories outside the watched set never disqualify") {
  CurationOptions opts;
  opts.categories = {kHandCategory};
  const std::vector<DetectionRecord> d{det(1, kTargetObjectCategory, 0.99)};
  CHECK(curate_backgrounds(frames({"A"}), d, opts).pool.entries.size() == 1);
}

TEST_CASE("digest callback and sorted entries") {
  CurationOptions opts;
  opts.digest = [](const FrameRef& r) { return "d-" + r.path; };
  const CurationResult r = curate_backgrounds(frames({"z", "m", "a"}), {}, opts);
  REQUIRE(r.pool.entries.size() == 3);
  CHECK(r.pool.entries[0] == PoolEntry{"a", 3, "d-a"});
  CHECK(r.pool.entries[2].path == "z");
}

TEST_CASE("pool is a monotone subset of the frames") {
  std::mt19937_64 rng(3);
  std::vector<FrameRef> f;
  for (int i = 0; i < 50; ++i) f.push_back({"f" + std::to_string(i), i});
  std::uniform_int_distribution<int> img(0, 60), cat(1, 3);
  std::uniform_real_distribution<double> score(0, 1);
  std::vector<DetectionRecord> d;
  for (int i = 0; i < 80; ++i) d.push_back(det(img(rng), cat(rng), score(rng)));

  std::set<std::string> all;
  for (const auto& x : f) all.insert(x.path);
  std::set<std::string> prev;
  for (double t = 0.0; t <= 1.0001; t += 0.05) {
    CurationOptions o;
    o.threshold = std::min(t, 1.0);
    auto cur = paths(curate_backgrounds(f, d, o).pool);
    CHECK(std::includes(all.begin(), all.end(), cur.begin(), cur.end()));
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
  // Adding a detection never grows the pool.
  auto before = paths(curate_backgrounds(f, d, {}).pool);
  d.push_back(det(7, kHandCategory, 0.5));
  auto after = paths(curate_backgrounds(f, d, {}).pool);
  CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
  CHECK_FALSE(after.contains("f7"));
}

TEST_CASE("sample_background") {
  BackgroundPool empty;
  Rng rng(1);
  CHECK_THROWS_AS(sample_background(empty, rng), Error);

  BackgroundPool one;
  one.entries = {{"only", 1, ""}};
  for (int i = 0; i < 10; ++i) CHECK(sample_background(one, rng).path == "only");

  BackgroundPool two;
  two.entries = {{"a", 1, ""}, {"b", 2, ""}};
  Rng r1(99), r2(99);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_background(two, r1).path == sample_background(two, r2).path);
  }

  // Binomial(100000, 1/2) has sd ~158; the 0.49-0.51 band is > 6 sd wide.
  Rng r(2024);
  int a = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) a += sample_background(two, r).path == "a";
  const double freq = static_cast<double>(a) / kDraws;
  CHECK(freq > 0.49);
  CHECK(freq < 0.51);
}

}  // namespace
}  // namespace bgmix
