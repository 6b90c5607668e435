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

#include "gmafed/models/model.hpp"

#include <algorithm>
#include <cmath>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/kernels.hpp"

namespace gmafed::models {
namespace {

namespace k = numerics::kernels;

// Offsets of each parameter block inside the packed vector.
struct Layout {
  std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0, total = 0;
};

Layout layout_of(const ModelSpec& spec) {
  Layout l;
  const std::size_t d = spec.input_dim, c = spec.num_classes;
  if (spec.kind == ModelKind::logistic_regression) {
    l.w1 = 0;
    l.b1 = d * c;
    l.total = d * c + c;
  } else {
    const std::size_t h = spec.hidden_dim;
    l.w1 = 0;
    l.b1 = h * d;
    l.w2 = l.b1 + h;
    l.b2 = l.w2 + c * h;
    l.total = l.b2 + c;
  }
  return l;
}

void check_params(const ModelSpec& spec, const ParamVector& w) {
  if (w.size() != spec.param_count())
    throw DataError("parameter vector has length " + std::to_string(w.size()) +
                    ", model expects " + std::to_string(spec.param_count()));
}

void check_batch(const ModelSpec& spec, BatchView batch) {
  if (batch.size() == 0) throw DataError("empty batch");
  if (batch.input_dim != spec.input_dim)
    throw DataError("feature width " + std::to_string(batch.input_dim) +
                    " does not match model input dim " + std::to_string(spec.input_dim));
  if (batch.features.size() != batch.size() * batch.input_dim)
    throw DataError("feature buffer size does not match batch shape");
  for (std::int32_t y : batch.labels)
    if (y < 0 || static_cast<std::size_t>(y) >= spec.num_classes)
      throw DataError("label " + std::to_string(y) + " outside [0, " +
                      std::to_string(spec.num_classes) + ")");
}

// Computes logits for one input row. `hidden` receives post-ReLU activations
// for the MLP and is untouched for logistic regression.
void forward_row(const ModelSpec& spec, const Layout& l, const double* w, const double* x,
                 double* hidden, double* logits) {
  const auto& kt = k::active();
  const std::size_t d = spec.input_dim, c = spec.num_classes;
  if (spec.kind == ModelKind::logistic_regression) {
    for (std::size_t j = 0; j < c; ++j) logits[j] = kt.dot(w + l.w1 + j * d, x, d) + w[l.b1 + j];
    return;
  }
  const std::size_t h = spec.hidden_dim;
  for (std::size_t j = 0; j < h; ++j) {
    const double pre = kt.dot(w + l.w1 + j * d, x, d) + w[l.b1 + j];
    hidden[j] = pre > 0.0 ? pre : 0.0;
  }
  for (std::size_t j = 0; j < c; ++j) logits[j] = kt.dot(w + l.w2 + j * h, hidden, h) + w[l.b2 + j];
}

// Turns logits into softmax probabilities in place; returns log-sum-exp.
double softmax_in_place(double* z, std::size_t c) {
  double top = z[0];
  for (std::size_t j = 1; j < c; ++j) top = std::max(top, z[j]);
  double sum = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    z[j] = std::exp(z[j] - top);
    sum += z[j];
  }
  for (std::size_t j = 0; j < c; ++j) z[j] /= sum;
  return top + std::log(sum);
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::mlp ? "mlp" : "logistic-regression";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "logistic-regression") return ModelKind::logistic_regression;
  if (name == "mlp") return ModelKind::mlp;
  throw ParameterError("unknown model kind '" + name + "' (valid: logistic-regression, mlp)");
}

ModelSpec ModelSpec::logistic(std::size_t input_dim, std::size_t num_classes) {
  ModelSpec s{ModelKind::logistic_regression, input_dim, 0, num_classes};
  s.validate();
  return s;
}

ModelSpec ModelSpec::mlp(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes) {
  ModelSpec s{ModelKind::mlp, input_dim, hidden_dim, num_classes};
  s.validate();
  return s;
}

void ModelSpec::validate() const {
  if (input_dim < 1) throw ParameterError("model input dim must be >= 1");
  if (num_classes < 2) throw ParameterError("model needs at least 2 classes");
  if (kind == ModelKind::mlp && hidden_dim < 1)
    throw ParameterError("mlp hidden dim must be >= 1");
  if (kind == ModelKind::logistic_regression && hidden_dim != 0)
    throw ParameterError("logistic regression must have hidden dim 0");
}

std::size_t ModelSpec::param_count() const { return layout_of(*this).total; }

ParamVector init_params(const ModelSpec& spec, numerics::Rng& rng) {
  spec.validate();
  const Layout l = layout_of(spec);
  ParamVector w(l.total);
  auto fill_uniform = [&](std::size_t offset, std::size_t count, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) w[offset + i] = bound * (2.0 * rng.uniform() - 1.0);
  };
  if (spec.kind == ModelKind::logistic_regression) {
    fill_uniform(l.w1, spec.num_classes * spec.input_dim, spec.input_dim);
  } else {
    fill_uniform(l.w1, spec.hidden_dim * spec.input_dim, spec.input_dim);
    fill_uniform(l.w2, spec.num_classes * spec.hidden_dim, spec.hidden_dim);
  }
  return w;
}

ParamVector init_params(const ModelSpec& spec, numerics::RngState state) {
  numerics::Rng rng(state);
  return init_params(spec, rng);
}

double loss_and_gradient_into(const ModelSpec& spec, const ParamVector& w, BatchView batch,
                              std::vector<double>& grad) {
  check_params(spec, w);
  check_batch(spec, batch);
  const Layout l = layout_of(spec);
  const auto& kt = k::active();
  const std::size_t d = spec.input_dim, c = spec.num_classes, h = spec.hidden_dim;
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  grad.assign(l.total, 0.0);
  std::vector<double> hidden(h), probs(c), dhidden(h);
  double loss = 0.0;

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double* x = batch.features.data() + i * d;
    const auto y = static_cast<std::size_t>(batch.labels[i]);
    forward_row(spec, l, w.data(), x, hidden.data(), probs.data());
    const double label_logit = probs[y];
    loss += softmax_in_place(probs.data(), c) - label_logit;

    // dL/dlogit = (p - onehot) / n
    for (std::size_t j = 0; j < c; ++j) probs[j] = (probs[j] - (j == y ? 1.0 : 0.0)) * inv_n;

    if (spec.kind == ModelKind::logistic_regression) {
      for (std::size_t j = 0; j < c; ++j) {
        kt.axpy(grad.data() + l.w1 + j * d, probs[j], x, d);
        grad[l.b1 + j] += probs[j];
      }
      continue;
    }
    std::fill(dhidden.begin(), dhidden.end(), 0.0);
    for (std::size_t j = 0; j < c; ++j) {
      kt.axpy(grad.data() + l.w2 + j * h, probs[j], hidden.data(), h);
      grad[l.b2 + j] += probs[j];
      kt.axpy(dhidden.data(), probs[j], w.data() + l.w2 + j * h, h);
    }
    for (std::size_t j = 0; j < h; ++j) {
      if (hidden[j] <= 0.0) continue;  // ReLU gate
      kt.axpy(grad.data() + l.w1 + j * d, dhidden[j], x, d);
      grad[l.b1 + j] += dhidden[j];
    }
  }
  return loss * inv_n;
}

LossAndGradient loss_and_gradient(const ModelSpec& spec, const ParamVector& w, BatchView batch) {
  std::vector<double> g;
  const double loss = loss_and_gradient_into(spec, w, batch, g);
  return {loss, ParamVector(std::move(g))};
}

Matrix predict_logits(const ModelSpec& spec, const ParamVector& w, const Matrix& features) {
  check_params(spec, w);
  if (features.cols != spec.input_dim)
    throw DataError("feature width " + std::to_string(features.cols) +
                    " does not match model input dim " + std::to_string(spec.input_dim));
  const Layout l = layout_of(spec);
  Matrix out(features.rows, spec.num_classes);
  std::vector<double> hidden(spec.hidden_dim);
  for (std::size_t i = 0; i < features.rows; ++i)
    forward_row(spec, l, w.data(), features.row(i).data(), hidden.data(), out.row(i).data());
  return out;
}

std::size_t argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j)
    if (row[j] > row[best]) best = j;
  return best;
}

Evaluation evaluate(const ModelSpec& spec, const ParamVector& w, BatchView data) {
  check_params(spec, w);
  check_batch(spec, data);
  const Layout l = layout_of(spec);
  std::vector<double> hidden(spec.hidden_dim), logits(spec.num_classes);
  std::size_t correct = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    forward_row(spec, l, w.data(), data.row(i).data(), hidden.data(), logits.data());
    const auto y = static_cast<std::size_t>(data.labels[i]);
    if (argmax(logits) == y) ++correct;
    const double label_logit = logits[y];
    loss += softmax_in_place(logits.data(), spec.num_classes) - label_logit;
  }
  const double n = static_cast<double>(data.size());
  return {static_cast<double>(correct) / n, loss / n};
}

double evaluate_accuracy(const ModelSpec& spec, const ParamVector& w, BatchView data) {
  return evaluate(spec, w, data).accuracy;
}

}  // namespace gmafed::models
