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

#ifndef BGMIX_CORE_H_
#define BGMIX_CORE_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgmix {

// All recoverable failures (validation, I/O, decode) surface as this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ImageId = std::int64_t;

inline constexpr int kHandCategory = 1;
inline constexpr int kTargetObjectCategory = 2;

// Interleaved 8-bit RGB raster, row-major, no padding.
class ImageBuffer {
 public:
  static constexpr int kChannels = 3;

  // Zero-filled image.
  ImageBuffer(int width, int height);
  // Takes ownership of `data`; its size must be width * height * 3.
  ImageBuffer(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t sample_count() const { return data_.size(); }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> mutable_data() { return data_; }

  const std::uint8_t* row(int y) const {
    return data_.data() + static_cast<std::size_t>(y) * width_ * kChannels;
  }
  std::uint8_t* mutable_row(int y) {
    return data_.data() + static_cast<std::size_t>(y) * width_ * kChannels;
  }

  std::uint8_t at(int x, int y, int c) const { return row(y)[x * kChannels + c]; }
  void set(int x, int y, int c, std::uint8_t v) {
    mutable_row(y)[x * kChannels + c] = v;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Axis-aligned box, (x, y) is the top-left corner. Zero or negative extents
// are rejected at construction.
class BoundBox {
 public:
  BoundBox(double x, double y, double w, double h);

  double x() const { return x_; }
  double y() const { return y_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double right() const { return x_ + w_; }
  double bottom() const { return y_ + h_; }

  // Lexicographic on (x, y, w, h).
  friend auto operator<=>(const BoundBox&, const BoundBox&) = default;
  friend bool operator==(const BoundBox&, const BoundBox&) = default;

 private:
  double x_;
  double y_;
  double w_;
  double h_;
};

double box_area(const BoundBox& b);
double iou(const BoundBox& a, const BoundBox& b);

// Intersection of `b` with [0, width] x [0, height]; nullopt when nothing
// of positive area remains.
std::optional<BoundBox> clamp_box(const BoundBox& b, double width, double height);

struct Category {
  int id = 0;
  std::string name;

  friend bool operator==(const Category&, const Category&) = default;
};

// {1: "hand", 2: "targetobject"}.
std::vector<Category> default_categories();

struct Annotation {
  std::int64_t id = 0;
  ImageId image_id = 0;
  int category_id = 0;
  BoundBox box{0, 0, 1, 1};

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct ImageRecord {
  ImageId id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct DatasetManifest {
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  std::vector<Category> categories;

  const ImageRecord* find_image(ImageId id) const;
  const Category* find_category(int id) const;
  std::vector<Annotation> annotations_for(ImageId id) const;

  // Structural equality; the clamp counter is load-time bookkeeping.
  bool operator==(const DatasetManifest& o) const {
    return images == o.images && annotations == o.annotations &&
           categories == o.categories;
  }

  // Number of annotations clipped to their image during validation.
  int clamp_warnings = 0;
};

// Enforces the manifest invariants in place: unique image and category ids,
// resolvable annotation image/category ids, boxes inside their image.
// Partially-outside boxes are clipped and counted; fully-outside boxes throw.
// Leaves images sorted by id and annotations sorted by id.
void validate_manifest(DatasetManifest& m);

}  // namespace bgmix

#endif  // BGMIX_CORE_H_
