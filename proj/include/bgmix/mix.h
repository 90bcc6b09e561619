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

#ifndef BGMIX_MIX_H_
#define BGMIX_MIX_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bgmix/core.h"
#include "bgmix/curation.h"
#include "bgmix/rng.h"

namespace bgmix {

enum class MixMode { kBackgroundMixup, kMixup, kMixupExternal };

// "bg-mixup", "mixup", "mixup-external".
std::string_view mix_mode_name(MixMode mode);
MixMode parse_mix_mode(std::string_view name);

struct MixConfig {
  double alpha = 1.0;
  double beta = 1.0;
  MixMode mode = MixMode::kBackgroundMixup;
  std::uint64_t master_seed = 0;
  std::optional<double> lambda_override;

  // Throws unless alpha > 0, beta > 0 and any override lies in [0, 1].
  void validate() const;
};

// An image together with its ground-truth boxes.
struct LabeledImage {
  ImageId id = 0;
  ImageBuffer image;
  std::vector<Annotation> annotations;
};

struct Provenance {
  MixMode mode = MixMode::kBackgroundMixup;
  std::vector<ImageId> source_ids;
  // Background path, partner image id, or external image path.
  std::string partner;
  double lambda = 1.0;
  std::uint64_t sample_seed = 0;
};

struct AugmentedSample {
  ImageBuffer image;
  std::vector<Annotation> annotations;
  Provenance provenance;
};

// Weight of the training image. Beta(alpha, beta) via two gamma draws unless
// the config carries an override.
double sample_lambda(const MixConfig& cfg, Rng& rng);

// out = floor(lambda * train + (1 - lambda) * bg + 0.5) per sample, in double
// precision. Throws on a dimension mismatch or lambda outside [0, 1].
ImageBuffer blend_images(const ImageBuffer& train, const ImageBuffer& bg,
                         double lambda);

// Bilinear resample with pixel-center alignment and edge clamping. Returns a
// copy when the size already matches.
ImageBuffer resize_to_match(const ImageBuffer& src, int target_width,
                            int target_height);

using ImageLoader = std::function<ImageBuffer(const std::string& path)>;

inline constexpr int kDefaultDecodeRetries = 8;

// Blends `sample` with a background drawn from `pool`; annotations pass
// through untouched. Draw order on `rng`: lambda, then background. A
// background the loader cannot decode is skipped and redrawn, up to
// `max_retries` redraws.
AugmentedSample background_mixup(const LabeledImage& sample,
                                 const BackgroundPool& pool,
                                 const MixConfig& cfg, Rng& rng,
                                 const ImageLoader& load,
                                 int max_retries = kDefaultDecodeRetries);

// Classic mixup of two labeled images. `b` is resized to `a`; the output
// keeps a's boxes followed by b's boxes rescaled into a's frame.
AugmentedSample mixup_pair(const LabeledImage& a, const LabeledImage& b,
                           const MixConfig& cfg, Rng& rng);

// Mixup against an unlabeled image; only the sample's boxes survive.
AugmentedSample mixup_external(const LabeledImage& sample,
                               const ImageBuffer& external,
                               std::string external_ref, const MixConfig& cfg,
                               Rng& rng);

}  // namespace bgmix

#endif  // BGMIX_MIX_H_
