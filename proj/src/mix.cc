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

#include "bgmix/mix.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace bgmix {
namespace {

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

}  // namespace

std::string_view mix_mode_name(MixMode mode) {
  switch (mode) {
    case MixMode::kBackgroundMixup:
      return "bg-mixup";
    case MixMode::kMixup:
      return "mixup";
    case MixMode::kMixupExternal:
      return "mixup-external";
  }
  return "unknown";
}

MixMode parse_mix_mode(std::string_view name) {
  if (name == "bg-mixup") return MixMode::kBackgroundMixup;
  if (name == "mixup") return MixMode::kMixup;
  if (name == "mixup-external") return MixMode::kMixupExternal;
  throw Error("unknown mix mode '" + std::string(name) + "'");
}

void MixConfig::validate() const {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw Error("alpha must be > 0");
  if (!(beta > 0) || !std::isfinite(beta)) throw Error("beta must be > 0");
  if (lambda_override) check_lambda(*lambda_override);
}

double sample_lambda(const MixConfig& cfg, Rng& rng) {
  if (cfg.lambda_override) return *cfg.lambda_override;
  std::gamma_distribution<double> ga(cfg.alpha, 1.0);
  std::gamma_distribution<double> gb(cfg.beta, 1.0);
  for (;;) {
    const double x = ga(rng);
    const double y = gb(rng);
    // Both gammas can underflow to zero for very small shapes.
    if (x + y > 0) return std::clamp(x / (x + y), 0.0, 1.0);
  }
}

ImageBuffer blend_images(const ImageBuffer& train, const ImageBuffer& bg,
                         double lambda) {
  if (train.width() != bg.width() || train.height() != bg.height()) {
    throw Error("blend needs equal dimensions, got " +
                std::to_string(train.width()) + "x" +
                std::to_string(train.height()) + " and " +
                std::to_string(bg.width()) + "x" + std::to_string(bg.height()));
  }
  check_lambda(lambda);
  const double mu = 1.0 - lambda;
  auto a = train.data();
  auto b = bg.data();
  std::vector<std::uint8_t> out(a.size());

  if (a.size() < 2 * 65536) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = quantize(lambda * a[i] + mu * b[i]);
    }
  } else {
    // Same formula, tabulated over every (train, bg) sample pair.
    std::vector<std::uint8_t> table(65536);
    for (int u = 0; u < 256; ++u) {
      for (int v = 0; v < 256; ++v) {
        table[(u << 8) | v] = quantize(lambda * u + mu * v);
      }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = table[(static_cast<unsigned>(a[i]) << 8) | b[i]];
    }
  }
  return ImageBuffer(train.width(), train.height(), std::move(out));
}

ImageBuffer resize_to_match(const ImageBuffer& src, int target_width,
                            int target_height) {
  if (target_width < 1 || target_height < 1) {
    throw Error("resize target must be at least 1x1");
  }
  if (src.width() == target_width && src.height() == target_height) {
    return src;
  }
  struct Tap {
    int lo;
    int hi;
    double frac;
  };
  auto taps = [](int src_len, int dst_len) {
    std::vector<Tap> t(dst_len);
    const double scale = static_cast<double>(src_len) / dst_len;
    for (int i = 0; i < dst_len; ++i) {
      double s = (i + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(src_len - 1));
      const int lo = static_cast<int>(std::floor(s));
      t[i] = {lo, std::min(lo + 1, src_len - 1), s - lo};
    }
    return t;
  };
  const std::vector<Tap> xs = taps(src.width(), target_width);
  const std::vector<Tap> ys = taps(src.height(), target_height);

  ImageBuffer out(target_width, target_height);
  constexpr int kC = ImageBuffer::kChannels;
  for (int y = 0; y < target_height; ++y) {
    const Tap& ty = ys[y];
    const std::uint8_t* r0 = src.row(ty.lo);
    const std::uint8_t* r1 = src.row(ty.hi);
    std::uint8_t* dst = out.mutable_row(y);
    for (int x = 0; x < target_width; ++x) {
      const Tap& tx = xs[x];
      for (int c = 0; c < kC; ++c) {
        const double top = (1.0 - tx.frac) * r0[tx.lo * kC + c] +
                           tx.frac * r0[tx.hi * kC + c];
        const double bot = (1.0 - tx.frac) * r1[tx.lo * kC + c] +
                           tx.frac * r1[tx.hi * kC + c];
        dst[x * kC + c] = quantize((1.0 - ty.frac) * top + ty.frac * bot);
      }
    }
  }
  return out;
}

AugmentedSample background_mixup(const LabeledImage& sample,
                                 const BackgroundPool& pool,
                                 const MixConfig& cfg, Rng& rng,
                                 const ImageLoader& load, int max_retries) {
  if (cfg.mode != MixMode::kBackgroundMixup) {
    throw Error("background_mixup called with mode " +
                std::string(mix_mode_name(cfg.mode)));
  }
  if (pool.empty()) throw Error("background pool is empty");
  const double lambda = sample_lambda(cfg, rng);

  std::string last_failure;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const PoolEntry& entry = sample_background(pool, rng);
    std::optional<ImageBuffer> bg;
    try {
      bg = load(entry.path);
    } catch (const Error& e) {
      last_failure = e.what();
      continue;
    }
    ImageBuffer fitted =
        resize_to_match(*bg, sample.image.width(), sample.image.height());
    return AugmentedSample{
        blend_images(sample.image, fitted, lambda),
        sample.annotations,
        Provenance{cfg.mode, {sample.id}, entry.path, lambda, 0},
    };
  }
  throw Error("no decodable background after " +
              std::to_string(max_retries + 1) + " attempts: " + last_failure);
}

AugmentedSample mixup_pair(const LabeledImage& a, const LabeledImage& b,
                           const MixConfig& cfg, Rng& rng) {
  if (cfg.mode != MixMode::kMixup) {
    throw Error("mixup_pair called with mode " +
                std::string(mix_mode_name(cfg.mode)));
  }
  if (a.id == b.id) {
    throw Error("mixup needs two distinct images, both are id " +
                std::to_string(a.id));
  }
  const double lambda = sample_lambda(cfg, rng);
  const int w = a.image.width();
  const int h = a.image.height();
  const double sx = static_cast<double>(w) / b.image.width();
  const double sy = static_cast<double>(h) / b.image.height();

  std::vector<Annotation> labels = a.annotations;
  labels.reserve(a.annotations.size() + b.annotations.size());
  for (const Annotation& src : b.annotations) {
    const BoundBox scaled(src.box.x() * sx, src.box.y() * sy,
                          src.box.w() * sx, src.box.h() * sy);
    // Rounding can push the far edge a hair past the border.
    auto fitted_box = clamp_box(scaled, w, h);
    if (!fitted_box) {
      throw Error("annotation " + std::to_string(src.id) +
                  " vanished after rescaling");
    }
    Annotation out = src;
    out.image_id = a.id;
    out.box = *fitted_box;
    labels.push_back(out);
  }
  ImageBuffer fitted = resize_to_match(b.image, w, h);
  return AugmentedSample{
      blend_images(a.image, fitted, lambda),
      std::move(labels),
      Provenance{cfg.mode, {a.id, b.id}, std::to_string(b.id), lambda, 0},
  };
}

AugmentedSample mixup_external(const LabeledImage& sample,
                               const ImageBuffer& external,
                               std::string external_ref, const MixConfig& cfg,
                               Rng& rng) {
  if (cfg.mode != MixMode::kMixupExternal) {
    throw Error("mixup_external called with mode " +
                std::string(mix_mode_name(cfg.mode)));
  }
  const double lambda = sample_lambda(cfg, rng);
  ImageBuffer fitted =
      resize_to_match(external, sample.image.width(), sample.image.height());
  return AugmentedSample{
      blend_images(sample.image, fitted, lambda),
      sample.annotations,
      Provenance{cfg.mode, {sample.id}, std::move(external_ref), lambda, 0},
  };
}

}  // namespace bgmix
