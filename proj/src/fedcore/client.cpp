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

#include "gmafed/fedcore/client.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gmafed/errors.hpp"
#include "gmafed/numerics/kernels.hpp"

namespace gmafed::fedcore {

void ClientConfig::validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ParameterError("client.lr must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ParameterError("client.momentum must lie in [0, 1)");
  if (epochs < 1) throw ParameterError("client.epochs must be >= 1");
  if (batch_size < 1) throw ParameterError("client.batch_size must be >= 1");
  if (!(prox_mu >= 0.0)) throw ParameterError("client.prox_mu must be >= 0");
}

namespace detail {

LocalResult client_local_update(const ModelSpec& spec, const ParamVector& w_global,
                                const data::Dataset& client_data, const ClientConfig& cfg,
                                numerics::Rng& rng, bool proximal_branch) {
  if (client_data.size() == 0) throw DataError("client has no data");
  const auto& kt = numerics::kernels::active();
  const std::size_t n = client_data.size();
  const std::size_t d = w_global.size();
  const std::size_t width = client_data.input_dim();
  const std::size_t batch = std::min(cfg.batch_size, n);
  const bool full_batch = batch == n;

  ParamVector w = w_global;
  std::vector<double> momentum(d, 0.0), grad, gap(d);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  models::Batch buf;
  buf.features = models::Matrix(batch, width);
  buf.labels.resize(batch);

  double loss_sum = 0.0;
  std::size_t steps = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (!full_batch) numerics::shuffle(order, rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t rows = std::min(batch, n - start);
      models::BatchView view;
      if (full_batch) {
        view = client_data.view();
      } else {
        for (std::size_t r = 0; r < rows; ++r) {
          const std::size_t i = order[start + r];
          std::copy_n(client_data.features.row(i).begin(), width, buf.features.row(r).begin());
          buf.labels[r] = client_data.labels[i];
        }
        view = {std::span<const double>(buf.features.values).first(rows * width),
                std::span<const std::int32_t>(buf.labels).first(rows), width};
      }
      loss_sum += models::loss_and_gradient_into(spec, w, view, grad);
      if (proximal_branch) {
        kt.sub(gap.data(), w.data(), w_global.data(), d);
        kt.axpy(grad.data(), cfg.prox_mu, gap.data(), d);
      }
      kt.momentum_step(w.data(), momentum.data(), grad.data(), cfg.lr, cfg.momentum, d);
      ++steps;
    }
  }

  LocalResult out{ParamVector(d), n, loss_sum / static_cast<double>(steps)};
  kt.sub(out.raw_delta.data(), w.data(), w_global.data(), d);
  return out;
}

}  // namespace detail

LocalResult client_local_update(const ModelSpec& spec, const ParamVector& w_global,
                                const data::Dataset& client_data, const ClientConfig& cfg,
                                numerics::Rng& rng) {
  cfg.validate();
  return detail::client_local_update(spec, w_global, client_data, cfg, rng, cfg.prox_mu > 0.0);
}

}  // namespace gmafed::fedcore
