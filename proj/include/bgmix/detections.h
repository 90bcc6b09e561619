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

#ifndef BGMIX_DETECTIONS_H_
#define BGMIX_DETECTIONS_H_

#include <string>
#include <vector>

#include "bgmix/core.h"

namespace bgmix {

// One detector output: a scored box for a category in an image.
struct DetectionRecord {
  ImageId image_id = 0;
  int category_id = 0;
  BoundBox box{0, 0, 1, 1};
  double score = 0.0;

  friend bool operator==(const DetectionRecord&,
                         const DetectionRecord&) = default;
};

struct DetectionSet {
  std::vector<DetectionRecord> records;
  std::string source;
  std::vector<Category> categories;
};

}  // namespace bgmix

#endif  // BGMIX_DETECTIONS_H_
