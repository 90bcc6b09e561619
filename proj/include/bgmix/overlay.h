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

#ifndef BGMIX_OVERLAY_H_
#define BGMIX_OVERLAY_H_

#include <array>
#include <cstdint>

#include "bgmix/core.h"

namespace bgmix {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kGroundTruthColor{0, 255, 0};
inline constexpr Rgb kPredictionColor{255, 0, 0};

// Draws the one-pixel outline of `box` covering pixel columns
// [floor(x), ceil(x + w) - 1] and the matching rows. Edges that fall outside
// the image are not drawn; the rest is clipped.
void draw_box_outline(ImageBuffer& img, const BoundBox& box, Rgb color);

}  // namespace bgmix

#endif  // BGMIX_OVERLAY_H_
