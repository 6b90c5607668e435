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

#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include "gmafed/data/dataset.hpp"
#include "gmafed/errors.hpp"
#include "support.hpp"

using namespace gmafed;
using gmafed::testing::TempDir;

namespace {

// IDX bytes built by hand, independent of the library writer.
std::vector<unsigned char> be32(std::uint32_t v) {
  return {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
}

std::vector<unsigned char> idx_images(std::uint32_t magic, std::uint32_t n, std::uint32_t rows,
                                      std::uint32_t cols, const std::vector<unsigned char>& px) {
  std::vector<unsigned char> out;
  for (std::uint32_t v : {magic, n, rows, cols})
    for (unsigned char b : be32(v)) out.push_back(b);
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

std::vector<unsigned char> idx_labels(std::uint32_t magic, const std::vector<unsigned char>& ys) {
  std::vector<unsigned char> out;
  for (std::uint32_t v : {magic, static_cast<std::uint32_t>(ys.size())})
    for (unsigned char b : be32(v)) out.push_back(b);
  out.insert(out.end(), ys.begin(), ys.end());
  return out;
}

void put(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string error_of(const std::filesystem::path& img, const std::filesystem::path& lbl) {
  try {
    data::load_idx(img, lbl);
  } catch (const IngestionError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("two-image fixture normalizes 0 and 255") {
  TempDir dir("idx");
  const auto img = dir.path() / "img", lbl = dir.path() / "lbl";
  put(img, idx_images(0x803, 2, 1, 2, {0, 255, 255, 0}));
  put(lbl, idx_labels(0x801, {1, 0}));
  const auto ds = data::load_idx(img, lbl);
  CHECK(ds.size() == 2);
  CHECK(ds.input_dim() == 2);
  CHECK(ds.features.values == std::vector<double>{0.0, 1.0, 1.0, 0.0});
  CHECK(ds.labels == std::vector<std::int32_t>{1, 0});
  CHECK(ds.num_classes == 2);
  CHECK_NOTHROW(ds.validate());
}

TEST_CASE("intermediate pixel values scale by 1/255") {
  TempDir dir("idx");
  const auto img = dir.path() / "img", lbl = dir.path() / "lbl";
  put(img, idx_images(0x803, 1, 2, 2, {1, 128, 254, 51}));
  put(lbl, idx_labels(0x801, {9}));
  const auto ds = data::load_idx(img, lbl);
  CHECK(ds.features.values == std::vector<double>{1 / 255.0, 128 / 255.0, 254 / 255.0, 51 / 255.0});
  CHECK(ds.num_classes == 10);
}

TEST_CASE("ingestion errors name the offending file") {
  TempDir dir("idx");
  const auto img = dir.path() / "images.idx", lbl = dir.path() / "labels.idx";
  put(lbl, idx_labels(0x801, {1, 0}));

  SUBCASE("images file with label magic") {
    put(img, idx_images(0x801, 2, 1, 2, {0, 1, 2, 3}));
    const auto msg = error_of(img, lbl);
    CHECK(msg.find("images.idx") != std::string::npos);
    CHECK(msg.find("0x00000801") != std::string::npos);
  }
  SUBCASE("labels file with image magic") {
    put(img, idx_images(0x803, 2, 1, 2, {0, 1, 2, 3}));
    put(lbl, idx_labels(0x803, {1, 0}));
    CHECK(error_of(img, lbl).find("labels.idx") != std::string::npos);
  }
  SUBCASE("truncated payload") {
    put(img, idx_images(0x803, 2, 1, 2, {0, 1, 2}));
    const auto msg = error_of(img, lbl);
    CHECK(msg.find("images.idx") != std::string::npos);
    CHECK(msg.find("truncated") != std::string::npos);
  }
  SUBCASE("truncated header") {
    put(img, {0, 0, 8, 3, 0, 0});
    CHECK(error_of(img, lbl).find("truncated") != std::string::npos);
  }
  SUBCASE("trailing bytes") {
    put(img, idx_images(0x803, 2, 1, 2, {0, 1, 2, 3, 4}));
    CHECK(error_of(img, lbl).find("trailing") != std::string::npos);
  }
  SUBCASE("count mismatch") {
    put(img, idx_images(0x803, 1, 1, 2, {0, 1}));
    const auto msg = error_of(img, lbl);
    CHECK(msg.find("labels.idx") != std::string::npos);
    CHECK(msg.find("images.idx") != std::string::npos);
  }
  SUBCASE("absurd dimensions") {
    put(img, idx_images(0x803, 0xffffffffu, 0xffffffffu, 0xffffffffu, {0, 1}));
    CHECK(error_of(img, lbl).find("truncated") != std::string::npos);
  }
  SUBCASE("missing file") {
    CHECK(error_of(dir.path() / "nope", lbl).find("nope") != std::string::npos);
  }
}

TEST_CASE("writer output reads back") {
  TempDir dir("idx");
  numerics::Rng rng(numerics::derive_stream(1, numerics::Purpose::test));
  data::Dataset ds = testing::random_dataset(rng, 6, 3, 4);
  for (double& v : ds.features.values) v = std::round(v * 255.0) / 255.0;
  data::write_idx_images(dir.path() / "i", ds.features, 2, 3);
  data::write_idx_labels(dir.path() / "l", ds.labels);
  const auto back = data::load_idx(dir.path() / "i", dir.path() / "l");
  CHECK(back == ds);
  CHECK_THROWS_AS(data::write_idx_images(dir.path() / "x", ds.features, 4, 4), ParameterError);
}
