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

#ifndef BGMIX_EVAL_H_
#define BGMIX_EVAL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "bgmix/core.h"
#include "bgmix/detections.h"

namespace bgmix {

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr double kDefaultConfidenceThreshold = 0.1;

struct MatchedPrediction {
  ImageId image_id = 0;
  BoundBox box{0, 0, 1, 1};
  double score = 0.0;
  bool true_positive = false;
  std::optional<std::int64_t> matched_gt;
};

// Predictions of one category in evaluation order, with the number of
// ground-truth boxes of that category.
struct MatchResult {
  int category_id = 0;
  std::vector<MatchedPrediction> predictions;
  std::size_t gt_count = 0;
};

// Sorts `preds` by (score desc, image id asc, box asc), then assigns each to
// the highest-IoU unmatched ground truth of `category_id` in the same image,
// provided IoU >= iou_threshold. Records of other categories are ignored.
MatchResult match_predictions(std::span<const DetectionRecord> preds,
                              const DatasetManifest& gt, int category_id,
                              double iou_threshold);

enum class ApInterpolation { kAllPoint, kVoc11Point };

// Area under the monotone precision envelope over recall. With no ground
// truth: 1 when there are no predictions either, otherwise 0.
double average_precision(const MatchResult& m,
                         ApInterpolation interp = ApInterpolation::kAllPoint);

// TP / (TP + FP) over predictions scoring >= conf_threshold; nullopt when
// none qualifies.
std::optional<double> precision_at_threshold(const MatchResult& m,
                                             double conf_threshold);
std::optional<double> precision_at_threshold(std::span<const DetectionRecord> preds,
                                             const DatasetManifest& gt,
                                             int category_id,
                                             double conf_threshold,
                                             double iou_threshold);

struct EvalConfig {
  double iou_threshold = kDefaultIouThreshold;
  double conf_threshold = kDefaultConfidenceThreshold;
  ApInterpolation interpolation = ApInterpolation::kAllPoint;
  // Empty means every category in the ground-truth manifest.
  std::vector<int> categories;
};

struct CategoryReport {
  int category_id = 0;
  std::string name;
  double ap = 0.0;
  std::optional<double> precision;
  // TP and FP among predictions at or above the confidence threshold.
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t gt = 0;
};

struct EvalReport {
  std::vector<CategoryReport> per_category;
  double map = 0.0;
  EvalConfig config;
};

// Throws when a prediction names a category or image the ground truth does
// not know, or when a configured category is missing from it.
EvalReport evaluate(const DetectionSet& preds, const DatasetManifest& gt,
                    const EvalConfig& config);

const char* interpolation_name(ApInterpolation interp);
ApInterpolation parse_interpolation(const std::string& name);

nlohmann::json report_to_json(const EvalReport& report);
// Fixed-width table: one AP column per category, mAP, then precision
// columns. Values are percentages with one decimal; undefined shows "-".
std::string format_table(const EvalReport& report);

}  // namespace bgmix

#endif  // BGMIX_EVAL_H_
