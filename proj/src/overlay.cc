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

#include "bgmix/overlay.h"

#include <algorithm>
#include <cmath>

namespace bgmix {

void draw_box_outline(ImageBuffer& img, const BoundBox& box, Rgb color) {
  const double left = std::floor(box.x());
  const double top = std::floor(box.y());
  const double right = std::ceil(box.right()) - 1;
  const double bottom = std::ceil(box.bottom()) - 1;
  const int w = img.width();
  const int h = img.height();
  if (right < 0 || bottom < 0 || left >= w || top >= h) return;

  const int x0 = static_cast<int>(std::max(left, 0.0));
  const int x1 = static_cast<int>(std::min(right, w - 1.0));
  const int y0 = static_cast<int>(std::max(top, 0.0));
  const int y1 = static_cast<int>(std::min(bottom, h - 1.0));

  auto paint = [&](int x, int y) {
    for (int c = 0; c < ImageBuffer::kChannels; ++c) img.set(x, y, c, color[c]);
  };
  for (int x = x0; x <= x1; ++x) {
    if (top >= 0) paint(x, static_cast<int>(top));
    if (bottom < h) paint(x, static_cast<int>(bottom));
  }
  for (int y = y0; y <= y1; ++y) {
    if (left >= 0) paint(static_cast<int>(left), y);
    if (right < w) paint(static_cast<int>(right), y);
  }
}

}  // namespace bgmix
