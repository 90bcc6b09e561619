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

#include "bgmix/core.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace bgmix {

ImageBuffer::ImageBuffer(int width, int height)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error("image dimensions must be >= 1, got " + std::to_string(width) +
                "x" + std::to_string(height));
  }
  data_.assign(static_cast<std::size_t>(width) * height * kChannels, 0);
}

ImageBuffer::ImageBuffer(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw Error("image dimensions must be >= 1, got " + std::to_string(width) +
                "x" + std::to_string(height));
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * kChannels) {
    throw Error("image buffer size " + std::to_string(data_.size()) +
                " does not match " + std::to_string(width) + "x" +
                std::to_string(height) + "x3");
  }
}

BoundBox::BoundBox(double x, double y, double w, double h)
    : x_(x), y_(y), w_(w), h_(h) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) ||
      !std::isfinite(h)) {
    throw Error("box coordinates must be finite");
  }
  if (!(w > 0) || !(h > 0)) {
    throw Error("box width and height must be positive");
  }
}

double box_area(const BoundBox& b) { return b.w() * b.h(); }

double iou(const BoundBox& a, const BoundBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x(), b.x());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y(), b.y());
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  // Areas from the same edge arithmetic as the intersection, so that
  // identical boxes give exactly 1.
  const double area_a = (a.right() - a.x()) * (a.bottom() - a.y());
  const double area_b = (b.right() - b.x()) * (b.bottom() - b.y());
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::optional<BoundBox> clamp_box(const BoundBox& b, double width,
                                  double height) {
  if (b.x() >= 0 && b.y() >= 0 && b.right() <= width && b.bottom() <= height) {
    return b;
  }
  const double x0 = std::max(b.x(), 0.0);
  const double y0 = std::max(b.y(), 0.0);
  const double x1 = std::min(b.right(), width);
  const double y1 = std::min(b.bottom(), height);
  if (!(x1 > x0) || !(y1 > y0)) return std::nullopt;
  // x0 + (x1 - x0) can round past x1; shrink until the edge stays inside.
  auto fit = [](double lo, double hi) {
    double d = hi - lo;
    while (d > 0 && lo + d > hi) d = std::nextafter(d, 0.0);
    return d;
  };
  const double w = fit(x0, x1);
  const double h = fit(y0, y1);
  if (!(w > 0) || !(h > 0)) return std::nullopt;
  return BoundBox(x0, y0, w, h);
}

std::vector<Category> default_categories() {
  return {{kHandCategory, "hand"}, {kTargetObjectCategory, "targetobject"}};
}

const ImageRecord* DatasetManifest::find_image(ImageId id) const {
  auto it = std::lower_bound(
      images.begin(), images.end(), id,
      [](const ImageRecord& r, ImageId v) { return r.id < v; });
  if (it != images.end() && it->id == id) return &*it;
  // Tolerate manifests that were assembled but not validated yet.
  for (const auto& r : images) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const Category* DatasetManifest::find_category(int id) const {
  for (const auto& c : categories) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<Annotation> DatasetManifest::annotations_for(ImageId id) const {
  std::vector<Annotation> out;
  for (const auto& a : annotations) {
    if (a.image_id == id) out.push_back(a);
  }
  return out;
}

void validate_manifest(DatasetManifest& m) {
  std::set<int> category_ids;
  for (const auto& c : m.categories) {
    if (!category_ids.insert(c.id).second) {
      throw Error("duplicate category id " + std::to_string(c.id));
    }
  }
  std::sort(m.categories.begin(), m.categories.end(),
            [](const Category& a, const Category& b) { return a.id < b.id; });

  std::sort(m.images.begin(), m.images.end(),
            [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < m.images.size(); ++i) {
    const auto& img = m.images[i];
    if (i > 0 && m.images[i - 1].id == img.id) {
      throw Error("duplicate image id " + std::to_string(img.id));
    }
    if (img.width < 1 || img.height < 1) {
      throw Error("image " + std::to_string(img.id) +
                  " has non-positive dimensions");
    }
  }

  std::sort(m.annotations.begin(), m.annotations.end(),
            [](const Annotation& a, const Annotation& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < m.annotations.size(); ++i) {
    auto& a = m.annotations[i];
    if (i > 0 && m.annotations[i - 1].id == a.id) {
      throw Error("duplicate annotation id " + std::to_string(a.id));
    }
    const ImageRecord* img = m.find_image(a.image_id);
    if (img == nullptr) {
      throw Error("annotation " + std::to_string(a.id) +
                  " references unknown image id " + std::to_string(a.image_id));
    }
    if (!category_ids.contains(a.category_id)) {
      throw Error("annotation " + std::to_string(a.id) +
                  " references unknown category id " +
                  std::to_string(a.category_id));
    }
    auto clamped = clamp_box(a.box, img->width, img->height);
    if (!clamped) {
      throw Error("annotation " + std::to_string(a.id) +
                  " lies entirely outside image " + std::to_string(img->id));
    }
    if (*clamped != a.box) {
      a.box = *clamped;
      ++m.clamp_warnings;
    }
  }
}

}  // namespace bgmix
