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

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>

#include <jpeglib.h>
#include <openssl/evp.h>
#include <png.h>

#include "bgmix/dataset_io.h"

namespace bgmix {
namespace {

constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

// Everything the libpng callbacks touch lives behind a pointer, so nothing
// the longjmp target reads was held in a register across setjmp.
struct PngReadState {
  std::span<const std::uint8_t> input;
  std::size_t pos = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  char message[256] = {};
};

void png_read_bytes(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->input.size() - st->pos < len) png_error(png, "unexpected end of data");
  std::memcpy(out, st->input.data() + st->pos, len);
  st->pos += len;
}

void png_on_error(png_structp png, png_const_charp msg) {
  auto* st = static_cast<PngReadState*>(png_get_error_ptr(png));
  std::snprintf(st->message, sizeof(st->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

bool decode_png_into(PngReadState* st) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, st, png_on_error, png_on_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, st, png_read_bytes);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  st->width = png_get_image_width(png, info);
  st->height = png_get_image_height(png, info);
  if (st->width == 0 || st->height == 0 || st->width > (1u << 16) ||
      st->height > (1u << 16) || png_get_rowbytes(png, info) != st->width * 3) {
    std::snprintf(st->message, sizeof(st->message), "unsupported PNG layout");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  st->pixels.resize(static_cast<std::size_t>(st->width) * st->height * 3);
  st->rows.resize(st->height);
  for (png_uint_32 y = 0; y < st->height; ++y) {
    st->rows[y] = st->pixels.data() + static_cast<std::size_t>(y) * st->width * 3;
  }
  png_read_image(png, st->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
  auto st = std::make_unique<PngReadState>();
  st->input = bytes;
  if (!decode_png_into(st.get())) {
    throw Error(std::string("PNG decode failed: ") + st->message);
  }
  return ImageBuffer(static_cast<int>(st->width), static_cast<int>(st->height),
                     std::move(st->pixels));
}

struct JpegErrorState {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX] = {};
};

void jpeg_on_error(j_common_ptr cinfo) {
  auto* st = reinterpret_cast<JpegErrorState*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, st->message);
  std::longjmp(st->jump, 1);
}

void jpeg_on_message(j_common_ptr) {}

struct JpegReadState {
  jpeg_decompress_struct cinfo;
  JpegErrorState err;
  std::vector<std::uint8_t> pixels;
  JDIMENSION width = 0;
  JDIMENSION height = 0;
};

bool decode_jpeg_into(JpegReadState* st, std::span<const std::uint8_t> bytes) {
  st->cinfo.err = jpeg_std_error(&st->err.mgr);
  st->err.mgr.error_exit = jpeg_on_error;
  st->err.mgr.output_message = jpeg_on_message;
  if (setjmp(st->err.jump)) {
    jpeg_destroy_decompress(&st->cinfo);
    return false;
  }
  jpeg_create_decompress(&st->cinfo);
  jpeg_mem_src(&st->cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&st->cinfo, TRUE);
  if (st->cinfo.jpeg_color_space == JCS_CMYK || st->cinfo.jpeg_color_space == JCS_YCCK) {
    std::snprintf(st->err.message, sizeof(st->err.message), "CMYK JPEG is not supported");
    jpeg_destroy_decompress(&st->cinfo);
    return false;
  }
  st->cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&st->cinfo);
  st->width = st->cinfo.output_width;
  st->height = st->cinfo.output_height;
  st->pixels.resize(static_cast<std::size_t>(st->width) * st->height * 3);
  while (st->cinfo.output_scanline < st->height) {
    JSAMPROW row = st->pixels.data() +
                   static_cast<std::size_t>(st->cinfo.output_scanline) * st->width * 3;
    jpeg_read_scanlines(&st->cinfo, &row, 1);
  }
  jpeg_finish_decompress(&st->cinfo);
  jpeg_destroy_decompress(&st->cinfo);
  return true;
}

ImageBuffer decode_jpeg(std::span<const std::uint8_t> bytes) {
  auto st = std::make_unique<JpegReadState>();
  if (!decode_jpeg_into(st.get(), bytes)) {
    throw Error(std::string("JPEG decode failed: ") + st->err.message);
  }
  return ImageBuffer(static_cast<int>(st->width), static_cast<int>(st->height),
                     std::move(st->pixels));
}

struct PngWriteState {
  std::vector<std::uint8_t> out;
  char message[256] = {};
};

void png_write_bytes(png_structp png, png_bytep data, png_size_t len) {
  auto* st = static_cast<PngWriteState*>(png_get_io_ptr(png));
  st->out.insert(st->out.end(), data, data + len);
}

void png_flush_noop(png_structp) {}

void png_on_write_error(png_structp png, png_const_charp msg) {
  auto* st = static_cast<PngWriteState*>(png_get_error_ptr(png));
  std::snprintf(st->message, sizeof(st->message), "%s", msg);
  png_longjmp(png, 1);
}

bool encode_png_into(PngWriteState* st, const ImageBuffer* img) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, st,
                                            png_on_write_error, png_on_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, st, png_write_bytes, png_flush_noop);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, img->width(), img->height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img->height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(img->row(y)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

struct JpegWriteState {
  jpeg_compress_struct cinfo;
  JpegErrorState err;
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
};

bool encode_jpeg_into(JpegWriteState* st, const ImageBuffer* img, int quality) {
  st->cinfo.err = jpeg_std_error(&st->err.mgr);
  st->err.mgr.error_exit = jpeg_on_error;
  st->err.mgr.output_message = jpeg_on_message;
  if (setjmp(st->err.jump)) {
    jpeg_destroy_compress(&st->cinfo);
    return false;
  }
  jpeg_create_compress(&st->cinfo);
  jpeg_mem_dest(&st->cinfo, &st->buffer, &st->size);
  st->cinfo.image_width = static_cast<JDIMENSION>(img->width());
  st->cinfo.image_height = static_cast<JDIMENSION>(img->height());
  st->cinfo.input_components = 3;
  st->cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&st->cinfo);
  jpeg_set_quality(&st->cinfo, quality, TRUE);
  jpeg_start_compress(&st->cinfo, TRUE);
  while (st->cinfo.next_scanline < st->cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(img->row(static_cast<int>(st->cinfo.next_scanline)));
    jpeg_write_scanlines(&st->cinfo, &row, 1);
  }
  jpeg_finish_compress(&st->cinfo);
  jpeg_destroy_compress(&st->cinfo);
  return true;
}

}  // namespace

ImageBuffer decode_image_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) {
    return decode_jpeg(bytes);
  }
  throw Error("unsupported image format (expected PNG or JPEG)");
}

ImageBuffer decode_image(const fs::path& path) {
  const auto bytes = read_binary_file(path);
  try {
    return decode_image_bytes(bytes);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  auto st = std::make_unique<PngWriteState>();
  if (!encode_png_into(st.get(), &img)) {
    throw Error(std::string("PNG encode failed: ") + st->message);
  }
  return std::move(st->out);
}

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality) {
  if (quality < 1 || quality > 100) throw Error("JPEG quality must be in [1, 100]");
  auto st = std::make_unique<JpegWriteState>();
  const bool ok = encode_jpeg_into(st.get(), &img, quality);
  std::vector<std::uint8_t> out;
  if (ok) out.assign(st->buffer, st->buffer + st->size);
  std::free(st->buffer);
  if (!ok) throw Error(std::string("JPEG encode failed: ") + st->err.message);
  return out;
}

void encode_image(const ImageBuffer& img, const fs::path& path, ImageFormat format,
                  int jpeg_quality) {
  const auto bytes =
      format == ImageFormat::kPng ? encode_png(img) : encode_jpeg(img, jpeg_quality);
  write_binary_file(path, bytes);
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_binary_file(path)); }

}  // namespace bgmix
