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
#include <span>
#include <string>
#include <vector>

#include "gmafed/numerics/param_vector.hpp"
#include "gmafed/numerics/rng.hpp"

namespace gmafed::models {

using numerics::ParamVector;

enum class ModelKind { logistic_regression, mlp };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);  // throws ParameterError

// Multinomial logistic regression, or one hidden ReLU layer followed by a
// softmax layer. Parameters are packed as
//   logistic: [W (C x D, row-major), b (C)]
//   mlp:      [W1 (H x D), b1 (H), W2 (C x H), b2 (C)]
struct ModelSpec {
  ModelKind kind = ModelKind::logistic_regression;
  std::size_t input_dim = 1;
  std::size_t hidden_dim = 0;
  std::size_t num_classes = 2;

  static ModelSpec logistic(std::size_t input_dim, std::size_t num_classes);
  static ModelSpec mlp(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes);

  // Throws ParameterError when the shape invariants do not hold.
  void validate() const;
  std::size_t param_count() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// Non-owning view of a labelled mini-batch: `features` holds size() rows of
// `input_dim` values each.
struct BatchView {
  std::span<const double> features;
  std::span<const std::int32_t> labels;
  std::size_t input_dim = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return features.subspan(i * input_dim, input_dim);
  }
};

struct Batch {
  Matrix features;
  std::vector<std::int32_t> labels;

  BatchView view() const { return {features.values, labels, features.cols}; }
};

ParamVector init_params(const ModelSpec& spec, numerics::Rng& rng);
ParamVector init_params(const ModelSpec& spec, numerics::RngState state);

struct LossAndGradient {
  double loss;
  ParamVector grad;
};

// Mean cross-entropy over the batch and its gradient. Throws DataError for an
// empty batch, out-of-range label or feature width mismatch.
LossAndGradient loss_and_gradient(const ModelSpec& spec, const ParamVector& w, BatchView batch);

// Same as above, writing the gradient into `grad` (resized if needed).
double loss_and_gradient_into(const ModelSpec& spec, const ParamVector& w, BatchView batch,
                              std::vector<double>& grad);

Matrix predict_logits(const ModelSpec& spec, const ParamVector& w, const Matrix& features);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> row);

// Fraction of rows whose argmax logit equals the label. Throws DataError on
// empty data.
double evaluate_accuracy(const ModelSpec& spec, const ParamVector& w, BatchView data);

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;
};

Evaluation evaluate(const ModelSpec& spec, const ParamVector& w, BatchView data);

}  // namespace gmafed::models
