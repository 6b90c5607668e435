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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gmafed/models/model.hpp"
#include "gmafed/numerics/rng.hpp"

namespace gmafed::data {

using models::Matrix;

// Labelled samples with features in [0, 1].
struct Dataset {
  Matrix features;
  std::vector<std::int32_t> labels;
  std::size_t num_classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t input_dim() const noexcept { return features.cols; }
  models::BatchView view() const { return {features.values, labels, features.cols}; }

  // Rows at `indices`, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  // Per-class sample counts (length num_classes).
  std::vector<std::size_t> class_counts() const;

  // Throws DataError when shape, label range or feature range is violated.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Reads an IDX image file (magic 0x00000803) and IDX label file (magic
// 0x00000801). Pixel bytes are scaled by 1/255. Throws IngestionError naming
// the offending file on bad magic, truncation or count mismatch.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

// Writes `images` (values in [0,1], rounded to bytes) in IDX layout with the
// given image grid. rows * cols must equal the feature width.
void write_idx_images(const std::filesystem::path& path, const Matrix& images, std::uint32_t rows,
                      std::uint32_t cols);
void write_idx_labels(const std::filesystem::path& path, std::span<const std::int32_t> labels);

// Class c is drawn around separation * e_(c mod input_dim) with unit
// isotropic noise, then scaled into [0,1] via
//   x = clip(raw / (separation + 1), 0, 1).
// Off-class coordinates are zero about half the time, as with image pixels.
// Samples are ordered class by class.
Dataset synth_blobs(numerics::Rng& rng, std::size_t num_classes, std::size_t per_class,
                    std::size_t input_dim, double separation);
Dataset synth_blobs(numerics::RngState state, std::size_t num_classes, std::size_t per_class,
                    std::size_t input_dim, double separation);

}  // namespace gmafed::data
