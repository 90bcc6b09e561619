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

#include "bgmix/curation.h"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace bgmix {

CurationResult curate_backgrounds(std::span<const FrameRef> frames,
                                  std::span<const DetectionRecord> detections,
                                  const CurationOptions& options) {
  if (frames.empty()) throw Error("curation needs at least one frame");
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
    throw Error("background threshold must lie in [0, 1]");
  }

  std::unordered_map<ImageId, std::size_t> index_of;
  std::unordered_set<std::string> paths;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!index_of.emplace(frames[i].id, i).second) {
      throw Error("duplicate frame id " + std::to_string(frames[i].id));
    }
    if (!paths.insert(frames[i].path).second) {
      throw Error("duplicate frame path " + frames[i].path);
    }
  }

  const std::set<int> watched(options.categories.begin(),
                              options.categories.end());
  CurationResult result;
  result.frames_in = frames.size();

  // Per frame, the set of categories that disqualify it.
  std::vector<std::set<int>> hits(frames.size());
  for (const auto& d : detections) {
    auto it = index_of.find(d.image_id);
    if (it == index_of.end()) {
      ++result.unknown_detections;
      continue;
    }
    if (watched.contains(d.category_id) && d.score >= options.threshold) {
      hits[it->second].insert(d.category_id);
    }
  }

  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!hits[i].empty()) {
      ++result.rejected;
      for (int c : hits[i]) ++result.rejected_by_category[c];
      continue;
    }
    PoolEntry e{frames[i].path, frames[i].id, {}};
    if (options.digest) e.digest = options.digest(frames[i]);
    result.pool.entries.push_back(std::move(e));
  }
  std::sort(result.pool.entries.begin(), result.pool.entries.end(),
            [](const PoolEntry& a, const PoolEntry& b) { return a.path < b.path; });

  result.pool.curation.threshold = options.threshold;
  result.pool.curation.categories.assign(watched.begin(), watched.end());
  result.pool.curation.source = options.source;
  result.empty_pool = result.pool.entries.empty();
  return result;
}

const PoolEntry& sample_background(const BackgroundPool& pool, Rng& rng) {
  if (pool.entries.empty()) throw Error("background pool is empty");
  std::uniform_int_distribution<std::size_t> pick(0, pool.entries.size() - 1);
  return pool.entries[pick(rng)];
}

}  // namespace bgmix
