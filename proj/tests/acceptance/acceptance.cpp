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

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "gmafed/cli/commands.hpp"
#include "gmafed/cli/config_io.hpp"
#include "gmafed/experiments/config.hpp"
#include "gmafed/experiments/studies.hpp"
#include "gmafed/fedcore/aggregation.hpp"
#include "gmafed/fedcore/server_optimizer.hpp"
#include "gmafed/fedcore/training.hpp"
#include "gmafed/numerics/kernels.hpp"
#include "support.hpp"

using namespace gmafed;
using experiments::ExperimentConfig;
using experiments::median;
using experiments::StudyKind;
using experiments::StudySpec;
using fedcore::Aggregator;
using numerics::derive_stream;
using numerics::ParamVector;
using numerics::Purpose;
using numerics::Rng;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

StudySpec study(StudyKind kind, ExperimentConfig base, std::vector<double> sweep, std::size_t reps) {
  StudySpec s;
  s.kind = kind;
  s.base = std::move(base);
  s.sweep = std::move(sweep);
  s.repetitions = reps;
  return s;
}

experiments::DataBundle data_for(const ExperimentConfig& c) {
  return experiments::load_data(c.dataset, c.seed, ".");
}

// Synthetic stand-in for the image benchmark: 10 classes in 20 dimensions.
ExperimentConfig synthetic_base() {
  ExperimentConfig c;
  c.dataset.synthetic = {10, 200, 100, 20, 3.0};
  c.client.lr = 0.05;
  c.rounds = 30;
  return c;
}

bool same_trace(const fedcore::TrainingTrace& a, const fedcore::TrainingTrace& b) {
  if (a.final_model != b.final_model || a.rounds.size() != b.rounds.size()) return false;
  for (std::size_t t = 0; t < a.rounds.size(); ++t) {
    const auto &x = a.rounds[t], &y = b.rounds[t];
    if (x.train_acc != y.train_acc || x.test_acc != y.test_acc || x.train_loss != y.train_loss ||
        x.test_loss != y.test_loss || x.metrics.participants != y.metrics.participants)
      return false;
  }
  return true;
}

ExperimentConfig random_config(Rng& rng) {
  for (;;) {
    ExperimentConfig c;
    c.seed = rng();
    c.rounds = 20;
    c.dataset.synthetic = {pick(rng, 2, 6), pick(rng, 10, 30), 10, pick(rng, 2, 10), 0.5 + 3.0 * rng.uniform()};
    if (rng.below(2)) c.model = {models::ModelKind::mlp, pick(rng, 2, 12)};
    c.partition.kind = static_cast<data::SkewKind>(rng.below(4));
    c.partition.classes_per_client = pick(rng, 1, c.dataset.synthetic.num_classes);
    c.partition.concentration = 0.1 + 2.0 * rng.uniform();
    c.partition.feature_skew.enabled = rng.below(4) == 0;
    c.round.n_clients = pick(rng, 1, 8);
    c.round.sample_size = pick(rng, 1, c.round.n_clients);
    c.client = {0.01 + 0.3 * rng.uniform(), 0.9 * rng.uniform(), pick(rng, 1, 3), pick(rng, 1, 16),
                rng.below(3) == 0 ? 0.1 * rng.uniform() : 0.0};
    c.server.kind = static_cast<fedcore::ServerOptimizerKind>(rng.below(3));
    c.server.lr = c.server.kind == fedcore::ServerOptimizerKind::fedavg ? 0.5 + rng.uniform() : 0.01 + 0.1 * rng.uniform();
    try {
      const auto bundle = data_for(c);
      experiments::build_setup(c, bundle);
      return c;
    } catch (const ParameterError&) {
      // infeasible shard layout or sizes; draw again
    }
  }
}

Outcome c1_tau_zero_identity() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(derive_stream(1001, Purpose::test));
  int control_differs = 0;  // tau = 0.5 should break the identity for most configs
  for (int i = 0; i < 50; ++i) {
    auto c = random_config(rng);
    const auto bundle = data_for(c);
    c.round.tau = 0.0;
    c.round.aggregator = Aggregator::avg;
    const auto avg = fedcore::run_training(experiments::build_setup(c, bundle));
    c.round.aggregator = Aggregator::gma;
    const auto gma = fedcore::run_training(experiments::build_setup(c, bundle));
    if (!same_trace(avg, gma)) return {false, "config " + std::to_string(i) + " diverged"};
    c.round.tau = 0.5;
    control_differs += !same_trace(avg, fedcore::run_training(experiments::build_setup(c, bundle)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {secs < 60.0 && control_differs > 0, "50 configs x 20 rounds bitwise equal in " + fmt(secs) +
                                                 " s; tau=0.5 control differs in " + std::to_string(control_differs)};
}

Outcome c2_convex_label_skew() {
  auto c = synthetic_base();
  c.partition.kind = data::SkewKind::label_shard;
  const auto s = study(StudyKind::convex_compare, c, {}, 4);
  const auto r = experiments::convex_compare(s, data_for(c));
  const double avg = r.median_test(true, Aggregator::avg), gma = r.median_test(true, Aggregator::gma);
  return {gma >= avg, "synthetic fallback (no IDX data), label skew median test acc gma " + fmt(gma) + " avg " +
                          fmt(avg) + "; iid gma " + fmt(r.median_test(false, Aggregator::gma)) + " avg " +
                          fmt(r.median_test(false, Aggregator::avg))};
}

Outcome c3_gradients() {
  Rng rng(derive_stream(1003, Purpose::test));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = testing::random_instance(rng, 200);
    const auto lg = models::loss_and_gradient(inst.spec, inst.w, inst.batch.view());
    const auto fd = testing::central_difference(inst.spec, inst.w, inst.batch.view(), 1e-5);
    worst = std::max(worst, testing::max_relative_error(lg.grad, fd));
  }
  return {worst < 1e-5, "100 instances, worst relative error " + fmt(worst)};
}

std::vector<fedcore::ClientUpdate> random_updates(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<fedcore::RawUpdate> raw;
  for (std::size_t i = 0; i < n; ++i) {
    ParamVector delta(d);
    for (auto& x : delta) x = rng.below(8) == 0 ? 0.0 : rng.normal() * std::exp(4.0 * rng.normal());
    raw.push_back({i, std::move(delta), 1 + rng.below(50)});
  }
  return fedcore::weight_updates(std::move(raw));
}

Outcome c4_mask_properties() {
  Rng rng(derive_stream(1004, Purpose::test));
  std::size_t range = 0, boundary = 0, scale = 0, perm = 0, order = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = pick(rng, 1, 20), d = pick(rng, 1, 40);
    const double tau = rng.uniform();
    const auto ups = random_updates(rng, n, d);
    const auto a = fedcore::agreement_score(ups);
    const auto g = fedcore::gma_mask(a, tau), m = fedcore::and_mask(a, tau);
    bool ok = true;
    for (std::size_t j = 0; j < d; ++j)
      ok = ok && a[j] >= 0.0 && a[j] <= 1.0 && g[j] >= 0.0 && g[j] <= 1.0 && (m[j] == 0.0 || m[j] == 1.0);
    range += ok;

    // boundary: exactly k of n clients push up, the rest down, tau = |2k - n| / n
    const std::size_t k = rng.below(n + 1);
    std::vector<fedcore::RawUpdate> raw;
    for (std::size_t i = 0; i < n; ++i) raw.push_back({i, ParamVector{i < k ? 0.5 : -2.0}, 10});
    const auto a1 = fedcore::agreement_score(fedcore::weight_updates(raw));
    const double edge = std::fabs(2.0 * static_cast<double>(k) - static_cast<double>(n)) / static_cast<double>(n);
    boundary += fedcore::gma_mask(a1, edge)[0] == 1.0 && fedcore::and_mask(a1, edge)[0] == 1.0;

    auto scaled = ups;
    const double c = std::exp(3.0 * rng.normal());
    for (auto& u : scaled)
      for (auto& x : u.raw_delta) x *= c;
    scale += fedcore::gma_mask(fedcore::agreement_score(scaled), tau) == g;

    auto shuffled = ups;
    numerics::shuffle(shuffled, rng);
    perm += fedcore::gma_mask(fedcore::agreement_score(shuffled), tau) == g;

    bool le = true;
    for (std::size_t j = 0; j < d; ++j) le = le && m[j] <= g[j];
    order += le;
  }
  const bool pass = range == 1000 && boundary == 1000 && scale == 1000 && perm == 1000 && order == 1000;
  return {pass, "range " + std::to_string(range) + ", boundary " + std::to_string(boundary) + ", scale " +
                    std::to_string(scale) + ", permutation " + std::to_string(perm) + ", and<=gma " +
                    std::to_string(order) + " of 1000"};
}

Outcome c5_agreement_trend() {
  auto c = synthetic_base();
  c.model = {models::ModelKind::mlp, 32};
  c.partition.kind = data::SkewKind::dirichlet_label;
  c.rounds = 20;
  const auto pts = experiments::agreement_homogeneity(
      study(StudyKind::agreement_homogeneity, c, {0.1, 1.0, 100.0}, 5), data_for(c));
  std::vector<double> med;
  for (const auto& p : pts) med.push_back(median(p.per_repetition));
  return {med[0] > med[1] && med[1] > med[2],
          "median frac(A<0.4) at alpha 0.1/1/100: " + fmt(med[0]) + " " + fmt(med[1]) + " " + fmt(med[2])};
}

Outcome c6_binary_mask_slower() {
  auto c = synthetic_base();
  c.model = {models::ModelKind::mlp, 32};
  c.partition.kind = data::SkewKind::label_shard;
  c.rounds = 40;
  const auto runs =
      experiments::mask_convergence(study(StudyKind::mask_convergence, c, {}, 5), data_for(c));
  std::vector<double> ra, rg, rn;
  for (const auto& r : runs) {
    ra.push_back(r.rounds_avg);
    rg.push_back(r.rounds_gma);
    rn.push_back(r.rounds_and);
  }
  const double g = median(rg), n = median(rn);
  return {n >= g, "median rounds to 90% of AVG ceiling: and " + fmt(n) + " gma " + fmt(g) + " avg " +
                      fmt(median(ra))};
}

Outcome c7_participation() {
  auto c = synthetic_base();
  c.partition.kind = data::SkewKind::label_shard;
  c.round.sample_size = 5;
  const auto runs =
      experiments::participation_gap(study(StudyKind::participation_gap, c, {}, 3), data_for(c));
  std::vector<double> in, out;
  for (const auto& r : runs) {
    in.push_back(r.improvement_participating);
    out.push_back(r.improvement_nonparticipating);
  }
  const double i = median(in), o = median(out);
  return {o > i, "median relative improvement non-participants " + fmt(o) + " vs participants " + fmt(i)};
}

Outcome c8_mask_stability() {
  experiments::MaskStabilityConfig cfg;  // mu 1, sigma 0.2, N 10, 1e4 trials
  Rng rng(derive_stream(1008, Purpose::monte_carlo));
  const double f = experiments::mask_stability_mc(cfg, rng);
  const std::vector<double> ratios{1, 2, 3, 5, 8};
  const auto grid = experiments::mask_stability_grid(cfg, ratios, 1008);
  bool mono = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double p = std::clamp(grid[i - 1], 1e-4, 1.0 - 1e-4);
    const double slack = 3.0 * std::sqrt(2.0 * p * (1.0 - p) / static_cast<double>(cfg.trials));
    mono = mono && grid[i] >= grid[i - 1] - slack;
  }
  std::string g;
  for (double x : grid) g += " " + fmt(x);
  return {f >= 0.999 && mono, "unmask frequency " + fmt(f) + "; grid mu/sigma 1,2,3,5,8:" + g};
}

Outcome c9_server_update() {
  bool ok = true;
  for (auto kind : {fedcore::ServerOptimizerKind::fedyogi, fedcore::ServerOptimizerKind::fedadam}) {
    auto s = fedcore::ServerOptimizerState::init({kind, 0.1, 0.9, 0.99, 1e-3}, 1);
    ParamVector w{0.0};
    fedcore::server_step(s, w, ParamVector{0.2}, ParamVector{1.0});
    ok = ok && std::fabs(s.v[0] - 0.0004) <= 1e-18;
  }
  Rng rng(derive_stream(1009, Purpose::test));
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = pick(rng, 1, 64);
    auto s = fedcore::ServerOptimizerState::init(
        {static_cast<fedcore::ServerOptimizerKind>(1 + rng.below(2)), 0.01 + rng.uniform(), 0.9, 0.99, 1e-3}, d);
    ParamVector w(d), delta(d), mask(d);
    for (std::size_t j = 0; j < d; ++j) {
      s.z[j] = rng.normal();
      s.v[j] = rng.uniform();
      w[j] = rng.normal();
      delta[j] = rng.normal();
      mask[j] = rng.uniform();
    }
    const ParamVector w0 = w;
    fedcore::server_step(s, w, delta, mask);
    for (std::size_t j = 0; j < d; ++j) {
      const double expect = w0[j] + s.config.lr * mask[j] * s.z[j] / (std::sqrt(s.v[j]) + 1e-3);
      worst = std::max(worst, std::fabs(w[j] - expect) / std::max(1.0, std::fabs(expect)));
    }
  }
  return {ok && worst <= 1e-12,
          std::string("v' = 0.0004 from v=0, delta=0.2: ") + (ok ? "yes" : "no") + "; masked step max rel err " +
              fmt(worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c10_reproducible_csv() {
  testing::TempDir tmp("acceptance-repro");
  auto c = synthetic_base();
  c.rounds = 10;
  c.partition.kind = data::SkewKind::dirichlet_label;
  c.model = {models::ModelKind::mlp, 16};
  std::ofstream(tmp.path() / "run.json") << cli::to_json(c).dump(2);
  std::ostringstream sink;
  for (const char* sub : {"a", "b"}) {
    cli::RunOptions o;
    o.config = tmp.path() / "run.json";
    o.output_dir = tmp.path() / sub;
    cli::cmd_run(o, sink);
  }
  const auto a = slurp(tmp.path() / "a" / "metrics.csv"), b = slurp(tmp.path() / "b" / "metrics.csv");
  return {!a.empty() && a == b, "two runs, metrics.csv " + std::to_string(a.size()) + " bytes, identical: " +
                                    (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"tau=0 GMA equals AVG bitwise", c1_tau_zero_identity},
      {"convex: GMA >= AVG under label skew", c2_convex_label_skew},
      {"analytic gradients vs finite differences", c3_gradients},
      {"mask property suite", c4_mask_properties},
      {"disagreement falls as alpha grows", c5_agreement_trend},
      {"AND-mask converges no faster than GMA", c6_binary_mask_slower},
      {"GMA helps non-participants more", c7_participation},
      {"mask stability under Gaussian updates", c8_mask_stability},
      {"adaptive server update and masked step", c9_server_update},
      {"identical config and seed give identical CSV", c10_reproducible_csv},
  };
  std::printf("kernels: %s\n", std::string(numerics::kernels::active_name()).c_str());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
