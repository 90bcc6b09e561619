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

#ifndef BGMIX_DATASET_IO_H_
#define BGMIX_DATASET_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "bgmix/core.h"
#include "bgmix/curation.h"
#include "bgmix/detections.h"

namespace bgmix {

namespace fs = std::filesystem;

// Canonical text form shared by every writer: sorted keys, two-space indent,
// trailing newline.
std::string canonical_dump(const nlohmann::json& j);
nlohmann::json read_json_file(const fs::path& path);
// Writes through a temporary sibling and renames it into place.
void write_text_file(const fs::path& path, const std::string& text);
std::vector<std::uint8_t> read_binary_file(const fs::path& path);
void write_binary_file(const fs::path& path, std::span<const std::uint8_t> bytes);

// COCO-style {images, annotations, categories}.
DatasetManifest manifest_from_json(const nlohmann::json& j);
nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest load_manifest(const fs::path& path);
void write_manifest(const DatasetManifest& m, const fs::path& path);

// COCO-results-style array of {image_id, category_id, bbox, score}. When
// `categories` is non-empty, category ids outside it are rejected. Errors
// name the offending array index.
DetectionSet detections_from_json(const nlohmann::json& j,
                                  const std::vector<Category>& categories);
DetectionSet load_detections(const fs::path& path,
                             const std::vector<Category>& categories);
nlohmann::json detections_to_json(std::span<const DetectionRecord> records);

// {entries: [{path, source_id, digest}], curation: {threshold, categories,
// source}}.
BackgroundPool pool_from_json(const nlohmann::json& j);
nlohmann::json pool_to_json(const BackgroundPool& pool);
BackgroundPool load_pool(const fs::path& path);
void write_pool(const BackgroundPool& pool, const fs::path& path);

enum class ImageFormat { kPng, kJpeg };

ImageFormat parse_image_format(const std::string& name);
const char* image_format_extension(ImageFormat format);

// PNG or JPEG, sniffed from the leading bytes. Grayscale is promoted to RGB,
// alpha is discarded, 16-bit samples are reduced to 8 bits.
ImageBuffer decode_image_bytes(std::span<const std::uint8_t> bytes);
ImageBuffer decode_image(const fs::path& path);
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);
void encode_image(const ImageBuffer& img, const fs::path& path,
                  ImageFormat format, int jpeg_quality = 95);

// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const fs::path& path);

}  // namespace bgmix

#endif  // BGMIX_DATASET_IO_H_
