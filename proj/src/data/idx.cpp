// Copyright 2026 The gmafed Authors. All Rights Reserved.
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "gmafed/data/dataset.hpp"
#include "gmafed/errors.hpp"

namespace gmafed::data {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open IDX file '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t offset) {
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

struct IdxHeader {
  std::vector<std::uint32_t> dims;
  std::size_t payload_offset = 0;
};

IdxHeader parse_header(const std::vector<unsigned char>& buf, std::uint32_t expected_magic,
                       const std::filesystem::path& path) {
  const std::string name = "'" + path.string() + "'";
  if (buf.size() < 4) throw IngestionError("IDX file " + name + " is truncated (no magic)");
  const std::uint32_t magic = read_be32(buf, 0);
  if (magic != expected_magic) {
    char hex[11];
    std::snprintf(hex, sizeof hex, "0x%08x", magic);
    char want[11];
    std::snprintf(want, sizeof want, "0x%08x", expected_magic);
    throw IngestionError("IDX file " + name + " has magic " + hex + ", expected " + want);
  }
  IdxHeader h;
  const std::size_t ndims = expected_magic & 0xff;
  h.payload_offset = 4 + 4 * ndims;
  if (buf.size() < h.payload_offset)
    throw IngestionError("IDX file " + name + " is truncated (incomplete header)");
  std::size_t expected_payload = 1;
  for (std::size_t i = 0; i < ndims; ++i) {
    h.dims.push_back(read_be32(buf, 4 + 4 * i));
    // Saturate rather than overflow on absurd dimensions; the size check below rejects them.
    if (h.dims.back() != 0 && expected_payload > buf.size()) continue;
    expected_payload *= h.dims.back();
  }
  const std::size_t actual = buf.size() - h.payload_offset;
  if (actual < expected_payload)
    throw IngestionError("IDX file " + name + " is truncated: expected " +
                         std::to_string(expected_payload) + " payload bytes, found " +
                         std::to_string(actual));
  if (actual > expected_payload)
    throw IngestionError("IDX file " + name + " has " + std::to_string(actual - expected_payload) +
                         " trailing bytes");
  return h;
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
  const auto image_bytes = read_file(images_path);
  const auto label_bytes = read_file(labels_path);
  const IdxHeader ih = parse_header(image_bytes, kImageMagic, images_path);
  const IdxHeader lh = parse_header(label_bytes, kLabelMagic, labels_path);

  const std::size_t count = ih.dims[0];
  const std::size_t width = std::size_t{ih.dims[1]} * ih.dims[2];
  if (lh.dims[0] != count)
    throw IngestionError("IDX label file '" + labels_path.string() + "' holds " +
                         std::to_string(lh.dims[0]) + " labels but '" + images_path.string() +
                         "' holds " + std::to_string(count) + " images");
  if (count == 0) throw IngestionError("IDX file '" + images_path.string() + "' holds no images");
  if (width == 0) throw IngestionError("IDX file '" + images_path.string() + "' has empty images");

  Dataset ds;
  ds.features = Matrix(count, width);
  const unsigned char* px = image_bytes.data() + ih.payload_offset;
  for (std::size_t i = 0; i < count * width; ++i) ds.features.values[i] = px[i] / 255.0;

  ds.labels.resize(count);
  std::int32_t top = 0;
  for (std::size_t i = 0; i < count; ++i) {
    ds.labels[i] = label_bytes[lh.payload_offset + i];
    top = std::max(top, ds.labels[i]);
  }
  ds.num_classes = std::max<std::size_t>(2, static_cast<std::size_t>(top) + 1);
  return ds;
}

void write_idx_images(const std::filesystem::path& path, const Matrix& images, std::uint32_t rows,
                      std::uint32_t cols) {
  if (std::size_t{rows} * cols != images.cols)
    throw ParameterError("IDX image grid does not match feature width");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write IDX file '" + path.string() + "'");
  put_be32(out, kImageMagic);
  put_be32(out, static_cast<std::uint32_t>(images.rows));
  put_be32(out, rows);
  put_be32(out, cols);
  for (double v : images.values) {
    const auto b = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    out.put(static_cast<char>(b));
  }
  if (!out) throw IoError("failed writing IDX file '" + path.string() + "'");
}

void write_idx_labels(const std::filesystem::path& path, std::span<const std::int32_t> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write IDX file '" + path.string() + "'");
  put_be32(out, kLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (std::int32_t y : labels) {
    if (y < 0 || y > 255) throw ParameterError("IDX labels must fit in one byte");
    out.put(static_cast<char>(y));
  }
  if (!out) throw IoError("failed writing IDX file '" + path.string() + "'");
}

}  // namespace gmafed::data
