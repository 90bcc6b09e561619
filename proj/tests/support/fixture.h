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

#ifndef BGMIX_TESTS_SUPPORT_FIXTURE_H_
#define BGMIX_TESTS_SUPPORT_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <string>

namespace bgmix::testing {

namespace fs = std::filesystem;

// Paths of a generated hand-object toy dataset.
struct FixtureLayout {
  fs::path root;
  fs::path train_manifest;    // 16 labeled images, inside images_dir
  fs::path images_dir;
  fs::path frames_dir;        // 12 unlabeled video-style frames
  fs::path frame_detections;  // detector output on the frames
  fs::path external_dir;      // 4 unlabeled images
  fs::path predictions;       // detector output on the training images
};

inline constexpr int kFixtureImages = 16;
inline constexpr int kFixtureFrames = 12;
// Frames 1, 4, 7 and 10 contain a hand; frame 4 also holds a 0.05 object.
inline constexpr int kFixtureForegroundFrames = 4;

// Writes the fixture below `root` (created if missing) and returns its
// layout. Output depends only on `seed`.
FixtureLayout write_synthetic_fixture(const fs::path& root, std::uint64_t seed = 7);

// SHA-256 over every regular file below `dir`: relative path, then content,
// in sorted path order.
std::string tree_digest(const fs::path& dir);

// Fresh empty directory under the system temp dir.
fs::path make_temp_dir(const std::string& tag);

}  // namespace bgmix::testing

#endif  // BGMIX_TESTS_SUPPORT_FIXTURE_H_
