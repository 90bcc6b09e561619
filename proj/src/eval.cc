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

#include "bgmix/eval.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace bgmix {

using nlohmann::json;

MatchResult match_predictions(std::span<const DetectionRecord> preds,
                              const DatasetManifest& gt, int category_id,
                              double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error("IoU threshold must lie in (0, 1]");
  }
  MatchResult result;
  result.category_id = category_id;

  // Ground truth of this category per image, in annotation id order.
  std::map<ImageId, std::vector<const Annotation*>> truth;
  for (const auto& a : gt.annotations) {
    if (a.category_id != category_id) continue;
    truth[a.image_id].push_back(&a);
    ++result.gt_count;
  }
  for (auto& [_, list] : truth) {
    std::sort(list.begin(), list.end(),
              [](const Annotation* a, const Annotation* b) { return a->id < b->id; });
  }

  std::vector<const DetectionRecord*> order;
  for (const auto& p : preds) {
    if (p.category_id == category_id) order.push_back(&p);
  }
  std::sort(order.begin(), order.end(),
            [](const DetectionRecord* a, const DetectionRecord* b) {
              if (a->score != b->score) return a->score > b->score;
              if (a->image_id != b->image_id) return a->image_id < b->image_id;
              return a->box < b->box;
            });

  std::set<std::int64_t> taken;
  result.predictions.reserve(order.size());
  for (const DetectionRecord* p : order) {
    MatchedPrediction mp{p->image_id, p->box, p->score, false, std::nullopt};
    auto it = truth.find(p->image_id);
    if (it != truth.end()) {
      double best = -1.0;
      const Annotation* best_gt = nullptr;
      for (const Annotation* g : it->second) {
        if (taken.contains(g->id)) continue;
        const double o = iou(p->box, g->box);
        if (o >= iou_threshold && o > best) {
          best = o;
          best_gt = g;
        }
      }
      if (best_gt != nullptr) {
        taken.insert(best_gt->id);
        mp.true_positive = true;
        mp.matched_gt = best_gt->id;
      }
    }
    result.predictions.push_back(mp);
  }
  return result;
}

double average_precision(const MatchResult& m, ApInterpolation interp) {
  if (m.gt_count == 0) return m.predictions.empty() ? 1.0 : 0.0;
  if (m.predictions.empty()) return 0.0;

  const auto n = m.predictions.size();
  std::vector<double> recall(n);
  std::vector<double> precision(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.predictions[i].true_positive) ++tp;
    recall[i] = static_cast<double>(tp) / static_cast<double>(m.gt_count);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }

  if (interp == ApInterpolation::kVoc11Point) {
    double sum = 0.0;
    for (int t = 0; t <= 10; ++t) {
      const double level = t / 10.0;
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (recall[i] >= level) best = std::max(best, precision[i]);
      }
      sum += best;
    }
    return sum / 11.0;
  }

  std::vector<double> mrec(n + 2);
  std::vector<double> mpre(n + 2);
  mrec[0] = 0.0;
  mpre[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mrec[i + 1] = recall[i];
    mpre[i + 1] = precision[i];
  }
  mrec[n + 1] = 1.0;
  mpre[n + 1] = 0.0;
  for (std::size_t i = n + 1; i-- > 0;) mpre[i] = std::max(mpre[i], mpre[i + 1]);
  double ap = 0.0;
  for (std::size_t i = 1; i < n + 2; ++i) {
    if (mrec[i] != mrec[i - 1]) ap += (mrec[i] - mrec[i - 1]) * mpre[i];
  }
  return std::clamp(ap, 0.0, 1.0);
}

std::optional<double> precision_at_threshold(const MatchResult& m,
                                             double conf_threshold) {
  std::size_t tp = 0;
  std::size_t total = 0;
  for (const auto& p : m.predictions) {
    if (p.score < conf_threshold) continue;
    ++total;
    if (p.true_positive) ++tp;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(total);
}

std::optional<double> precision_at_threshold(std::span<const DetectionRecord> preds,
                                             const DatasetManifest& gt,
                                             int category_id,
                                             double conf_threshold,
                                             double iou_threshold) {
  if (!(conf_threshold >= 0.0 && conf_threshold <= 1.0)) {
    throw Error("confidence threshold must lie in [0, 1]");
  }
  return precision_at_threshold(
      match_predictions(preds, gt, category_id, iou_threshold), conf_threshold);
}

EvalReport evaluate(const DetectionSet& preds, const DatasetManifest& gt,
                    const EvalConfig& config) {
  if (!(config.conf_threshold >= 0.0 && config.conf_threshold <= 1.0)) {
    throw Error("confidence threshold must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < preds.records.size(); ++i) {
    const auto& r = preds.records[i];
    if (gt.find_category(r.category_id) == nullptr) {
      throw Error("detection " + std::to_string(i) + " has category id " +
                  std::to_string(r.category_id) + " unknown to the ground truth");
    }
    if (gt.find_image(r.image_id) == nullptr) {
      throw Error("detection " + std::to_string(i) + " refers to image id " +
                  std::to_string(r.image_id) + " unknown to the ground truth");
    }
  }

  EvalReport report;
  report.config = config;
  if (report.config.categories.empty()) {
    for (const auto& c : gt.categories) report.config.categories.push_back(c.id);
  }

  double sum = 0.0;
  for (int id : report.config.categories) {
    const Category* cat = gt.find_category(id);
    if (cat == nullptr) {
      throw Error("category id " + std::to_string(id) + " is not in the ground truth");
    }
    const MatchResult m =
        match_predictions(preds.records, gt, id, config.iou_threshold);
    CategoryReport cr;
    cr.category_id = id;
    cr.name = cat->name;
    cr.ap = average_precision(m, config.interpolation);
    cr.precision = precision_at_threshold(m, config.conf_threshold);
    cr.gt = m.gt_count;
    for (const auto& p : m.predictions) {
      if (p.score < config.conf_threshold) continue;
      (p.true_positive ? cr.tp : cr.fp) += 1;
    }
    sum += cr.ap;
    report.per_category.push_back(std::move(cr));
  }
  if (!report.per_category.empty()) {
    report.map = sum / static_cast<double>(report.per_category.size());
  }
  return report;
}

const char* interpolation_name(ApInterpolation interp) {
  return interp == ApInterpolation::kAllPoint ? "all-point" : "voc11";
}

ApInterpolation parse_interpolation(const std::string& name) {
  if (name == "all-point") return ApInterpolation::kAllPoint;
  if (name == "voc11") return ApInterpolation::kVoc11Point;
  throw Error("unknown AP interpolation '" + name + "'");
}

json report_to_json(const EvalReport& report) {
  json per = json::object();
  for (const auto& c : report.per_category) {
    per[c.name] = {{"category_id", c.category_id},
                   {"ap", c.ap},
                   {"precision", c.precision ? json(*c.precision) : json(nullptr)},
                   {"tp", c.tp},
                   {"fp", c.fp},
                   {"gt", c.gt}};
  }
  return {{"per_category", per},
          {"map", report.map},
          {"config",
           {{"iou_threshold", report.config.iou_threshold},
            {"conf_threshold", report.config.conf_threshold},
            {"interpolation", interpolation_name(report.config.interpolation)},
            {"categories", report.config.categories},
            {"zero_gt_rule", "ap=1 without predictions, 0 with any"}}}};
}

namespace {

std::string column_label(const CategoryReport& c) {
  if (c.category_id == kHandCategory && c.name == "hand") return "hand";
  if (c.category_id == kTargetObjectCategory && c.name == "targetobject") return "obj";
  return c.name;
}

std::string percent(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", *v * 100.0);
  return buf;
}

}  // namespace

std::string format_table(const EvalReport& report) {
  std::vector<std::string> head;
  std::vector<std::string> row;
  for (const auto& c : report.per_category) {
    head.push_back(column_label(c) + " AP");
    row.push_back(percent(c.ap));
  }
  head.push_back("mAP");
  row.push_back(percent(report.map));
  char thr[32];
  std::snprintf(thr, sizeof(thr), "%g", report.config.conf_threshold);
  for (const auto& c : report.per_category) {
    head.push_back(column_label(c) + " P@" + thr);
    row.push_back(percent(c.precision));
  }

  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t width = std::max<std::size_t>(head[i].size(), 6);
      if (i > 0) out += " | ";
      out += std::string(width - std::min(width, cells[i].size()), ' ') + cells[i];
    }
    out += "\n";
  };
  emit(head);
  emit(row);
  return out;
}

}  // namespace bgmix
