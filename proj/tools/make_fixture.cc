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

#include <cstdlib>
#include <iostream>

#include "support/fixture.h"

// Writes the synthetic 16-image hand-object fixture used by the test suites.
int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_fixture <dir> [seed]\n";
    return 2;
  }
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;
  const auto layout = bgmix::testing::write_synthetic_fixture(argv[1], seed);
  std::cout << "manifest:    " << layout.train_manifest.string() << "\n"
            << "frames:      " << layout.frames_dir.string() << "\n"
            << "detections:  " << layout.frame_detections.string() << "\n"
            << "external:    " << layout.external_dir.string() << "\n"
            << "predictions: " << layout.predictions.string() << "\n";
  return 0;
}
