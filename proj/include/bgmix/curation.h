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

#ifndef BGMIX_CURATION_H_
#define BGMIX_CURATION_H_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bgmix/core.h"
#include "bgmix/detections.h"
#include "bgmix/rng.h"

namespace bgmix {

inline constexpr double kDefaultBackgroundThreshold = 0.1;

struct FrameRef {
  std::string path;
  ImageId id = 0;
};

struct PoolEntry {
  std::string path;
  ImageId source_id = 0;
  std::string digest;

  friend bool operator==(const PoolEntry&, const PoolEntry&) = default;
};

// How a pool was produced; stored alongside the entries.
struct CurationInfo {
  double threshold = kDefaultBackgroundThreshold;
  std::vector<int> categories;
  std::string source;

  friend bool operator==(const CurationInfo&, const CurationInfo&) = default;
};

// Foreground-free frames usable as blend partners. Entries are unique by
// path and kept sorted by path.
struct BackgroundPool {
  std::vector<PoolEntry> entries;
  CurationInfo curation;

  bool empty() const { return entries.empty(); }
  friend bool operator==(const BackgroundPool&, const BackgroundPool&) = default;
};

struct CurationOptions {
  double threshold = kDefaultBackgroundThreshold;
  std::vector<int> categories{kHandCategory, kTargetObjectCategory};
  std::string source;
  // Fills PoolEntry::digest for kept frames; left empty when unset.
  std::function<std::string(const FrameRef&)> digest;
};

struct CurationResult {
  BackgroundPool pool;
  std::size_t frames_in = 0;
  // Detections whose image id matches no listed frame.
  std::size_t unknown_detections = 0;
  // Rejected frames per disqualifying category; a frame can count under
  // several categories.
  std::map<int, std::size_t> rejected_by_category;
  std::size_t rejected = 0;
  bool empty_pool = false;
};

// Keeps exactly the frames with no detection of a listed category scoring at
// or above the threshold. Throws on empty `frames`, duplicate frame paths or
// ids, or a threshold outside [0, 1].
CurationResult curate_backgrounds(std::span<const FrameRef> frames,
                                  std::span<const DetectionRecord> detections,
                                  const CurationOptions& options);

// Uniform draw over the pool entries. Throws on an empty pool.
const PoolEntry& sample_background(const BackgroundPool& pool, Rng& rng);

}  // namespace bgmix

#endif  // BGMIX_CURATION_H_
