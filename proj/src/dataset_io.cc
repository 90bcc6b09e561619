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

#include "bgmix/dataset_io.h"

#include <algorithm>
#include <fstream>
#include <set>

namespace bgmix {

using nlohmann::json;

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_binary_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot write " + path.string() + ": " + ec.message());
}

void write_text_file(const fs::path& path, const std::string& text) {
  write_binary_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                    text.size()));
}

std::vector<std::uint8_t> read_binary_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw Error(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(where + ": missing field '" + key + "'");
  return *it;
}

std::int64_t int_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) {
    throw Error(where + ": field '" + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

double number_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw Error(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

BoundBox bbox_field(const json& obj, const std::string& where) {
  const json& v = field(obj, "bbox", where);
  if (!v.is_array() || v.size() != 4 ||
      !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
    throw Error(where + ": bbox must be an array of 4 numbers");
  }
  try {
    return BoundBox(v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                    v[3].get<double>());
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
}

json bbox_json(const BoundBox& b) { return json::array({b.x(), b.y(), b.w(), b.h()}); }

const json& array_field(const json& obj, const char* key) {
  const json& v = field(obj, key, "manifest");
  if (!v.is_array()) throw Error(std::string("manifest: '") + key + "' must be an array");
  return v;
}

}  // namespace

DatasetManifest manifest_from_json(const json& j) {
  DatasetManifest m;
  const json& images = array_field(j, "images");
  const json& annotations = array_field(j, "annotations");
  const json& categories = array_field(j, "categories");

  for (std::size_t i = 0; i < categories.size(); ++i) {
    const std::string where = "categories[" + std::to_string(i) + "]";
    const json& name = field(categories[i], "name", where);
    if (!name.is_string()) throw Error(where + ": name must be a string");
    m.categories.push_back(
        {static_cast<int>(int_field(categories[i], "id", where)), name.get<std::string>()});
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const json& file = field(images[i], "file_name", where);
    if (!file.is_string()) throw Error(where + ": file_name must be a string");
    m.images.push_back({int_field(images[i], "id", where), file.get<std::string>(),
                        static_cast<int>(int_field(images[i], "width", where)),
                        static_cast<int>(int_field(images[i], "height", where))});
  }
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const json& a = annotations[i];
    m.annotations.push_back({int_field(a, "id", where), int_field(a, "image_id", where),
                             static_cast<int>(int_field(a, "category_id", where)),
                             bbox_field(a, where)});
  }
  validate_manifest(m);
  return m;
}

json manifest_to_json(const DatasetManifest& m) {
  std::vector<ImageRecord> images = m.images;
  std::sort(images.begin(), images.end(),
            [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
  std::vector<Annotation> annotations = m.annotations;
  std::sort(annotations.begin(), annotations.end(),
            [](const Annotation& a, const Annotation& b) { return a.id < b.id; });
  std::vector<Category> categories = m.categories;
  std::sort(categories.begin(), categories.end(),
            [](const Category& a, const Category& b) { return a.id < b.id; });

  json j = {{"images", json::array()},
            {"annotations", json::array()},
            {"categories", json::array()}};
  for (const auto& img : images) {
    j["images"].push_back({{"id", img.id},
                           {"file_name", img.file_name},
                           {"width", img.width},
                           {"height", img.height}});
  }
  for (const auto& a : annotations) {
    j["annotations"].push_back({{"id", a.id},
                                {"image_id", a.image_id},
                                {"category_id", a.category_id},
                                {"bbox", bbox_json(a.box)}});
  }
  for (const auto& c : categories) {
    j["categories"].push_back({{"id", c.id}, {"name", c.name}});
  }
  return j;
}

DatasetManifest load_manifest(const fs::path& path) {
  const json j = read_json_file(path);
  try {
    return manifest_from_json(j);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_manifest(const DatasetManifest& m, const fs::path& path) {
  write_text_file(path, canonical_dump(manifest_to_json(m)));
}

DetectionSet detections_from_json(const json& j, const std::vector<Category>& categories) {
  if (!j.is_array()) throw Error("detections: expected a JSON array");
  DetectionSet set;
  set.categories = categories;
  set.records.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "detection[" + std::to_string(i) + "]";
    const json& e = j[i];
    DetectionRecord r{int_field(e, "image_id", where),
                      static_cast<int>(int_field(e, "category_id", where)),
                      bbox_field(e, where), number_field(e, "score", where)};
    if (!(r.score >= 0.0 && r.score <= 1.0)) {
      throw Error(where + ": score " + std::to_string(r.score) + " outside [0, 1]");
    }
    if (!categories.empty() &&
        std::none_of(categories.begin(), categories.end(),
                     [&](const Category& c) { return c.id == r.category_id; })) {
      throw Error(where + ": unknown category id " + std::to_string(r.category_id));
    }
    set.records.push_back(r);
  }
  return set;
}

DetectionSet load_detections(const fs::path& path, const std::vector<Category>& categories) {
  const json j = read_json_file(path);
  try {
    DetectionSet set = detections_from_json(j, categories);
    set.source = path.string();
    return set;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

json detections_to_json(std::span<const DetectionRecord> records) {
  json j = json::array();
  for (const auto& r : records) {
    j.push_back({{"image_id", r.image_id},
                 {"category_id", r.category_id},
                 {"bbox", bbox_json(r.box)},
                 {"score", r.score}});
  }
  return j;
}

BackgroundPool pool_from_json(const json& j) {
  BackgroundPool pool;
  const json& entries = field(j, "entries", "pool");
  if (!entries.is_array()) throw Error("pool: 'entries' must be an array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "pool.entries[" + std::to_string(i) + "]";
    const json& path = field(entries[i], "path", where);
    const json& digest = field(entries[i], "digest", where);
    if (!path.is_string() || !digest.is_string()) {
      throw Error(where + ": path and digest must be strings");
    }
    if (!seen.insert(path.get<std::string>()).second) {
      throw Error(where + ": duplicate path " + path.get<std::string>());
    }
    pool.entries.push_back(
        {path.get<std::string>(), int_field(entries[i], "source_id", where),
         digest.get<std::string>()});
  }
  std::sort(pool.entries.begin(), pool.entries.end(),
            [](const PoolEntry& a, const PoolEntry& b) { return a.path < b.path; });

  const json& cur = field(j, "curation", "pool");
  pool.curation.threshold = number_field(cur, "threshold", "pool.curation");
  const json& cats = field(cur, "categories", "pool.curation");
  if (!cats.is_array()) throw Error("pool.curation: categories must be an array");
  for (const json& c : cats) {
    if (!c.is_number_integer()) throw Error("pool.curation: category ids must be integers");
    pool.curation.categories.push_back(c.get<int>());
  }
  const json& source = field(cur, "source", "pool.curation");
  if (!source.is_string()) throw Error("pool.curation: source must be a string");
  pool.curation.source = source.get<std::string>();
  return pool;
}

json pool_to_json(const BackgroundPool& pool) {
  std::vector<PoolEntry> entries = pool.entries;
  std::sort(entries.begin(), entries.end(),
            [](const PoolEntry& a, const PoolEntry& b) { return a.path < b.path; });
  json j = {{"entries", json::array()},
            {"curation",
             {{"threshold", pool.curation.threshold},
              {"categories", pool.curation.categories},
              {"source", pool.curation.source}}}};
  for (const auto& e : entries) {
    j["entries"].push_back({{"path", e.path}, {"source_id", e.source_id}, {"digest", e.digest}});
  }
  return j;
}

BackgroundPool load_pool(const fs::path& path) {
  const json j = read_json_file(path);
  try {
    return pool_from_json(j);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_pool(const BackgroundPool& pool, const fs::path& path) {
  write_text_file(path, canonical_dump(pool_to_json(pool)));
}

ImageFormat parse_image_format(const std::string& name) {
  if (name == "png") return ImageFormat::kPng;
  if (name == "jpeg" || name == "jpg") return ImageFormat::kJpeg;
  throw Error("unsupported image format '" + name + "'");
}

const char* image_format_extension(ImageFormat format) {
  return format == ImageFormat::kPng ? ".png" : ".jpg";
}

}  // namespace bgmix
