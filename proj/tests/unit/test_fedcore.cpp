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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gmafed/data/partition.hpp"
#include "gmafed/errors.hpp"
#include "gmafed/fedcore/aggregation.hpp"
#include "gmafed/fedcore/client.hpp"
#include "gmafed/fedcore/round.hpp"
#include "gmafed/fedcore/training.hpp"
#include "gmafed/numerics/sampling.hpp"
#include "gmafed/numerics/vector_ops.hpp"
#include "support.hpp"

using namespace gmafed;
using namespace gmafed::fedcore;
using numerics::derive_stream;
using numerics::Purpose;
using numerics::Rng;

namespace {

std::vector<ClientUpdate> updates_from(std::vector<ParamVector> deltas,
                                       std::vector<std::size_t> counts = {}) {
  std::vector<RawUpdate> raw;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    raw.push_back({i, std::move(deltas[i]), counts.empty() ? 1 : counts[i]});
  return weight_updates(std::move(raw));
}

Federation blob_federation(std::uint64_t seed, std::size_t n_clients, bool label_skew) {
  const auto ds = data::synth_blobs(derive_stream(seed, Purpose::synthetic_data), 4, 30, 6, 2.0);
  Rng rng(derive_stream(seed, Purpose::partition));
  const auto plan = label_skew ? data::partition_label_shards(rng, ds, n_clients, 2)
                               : data::partition_iid(rng, ds, n_clients);
  Federation fed{models::ModelSpec::logistic(6, 4), {}};
  for (const auto& a : plan.assignments) fed.clients.push_back(ds.subset(a));
  return fed;
}

TrainingSetup blob_setup(std::uint64_t seed, Aggregator agg, double tau) {
  TrainingSetup s;
  s.federation = blob_federation(seed, 4, true);
  const auto ds = data::synth_blobs(derive_stream(seed, Purpose::synthetic_data), 4, 30, 6, 2.0);
  s.train_eval = ds;
  s.test = data::synth_blobs(derive_stream(seed + 100, Purpose::synthetic_data), 4, 10, 6, 2.0);
  s.round = RoundConfig{4, 3, agg, tau};
  s.client.lr = 0.1;
  s.rounds = 5;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("client update: zero learning rate does not move") {
  Rng rng(derive_stream(1, Purpose::test));
  const auto ds = testing::random_dataset(rng, 3, 2, 10);
  const auto spec = models::ModelSpec::logistic(3, 2);
  const auto w = models::init_params(spec, derive_stream(1, Purpose::model_init));
  ClientConfig cfg;
  cfg.lr = 0.0;
  const auto r = client_local_update(spec, w, ds, cfg, rng);
  for (double v : r.raw_delta) CHECK(v == 0.0);
  CHECK(r.sample_count == 20);
}

TEST_CASE("client update: one full-batch step without momentum is -lr * grad") {
  Rng rng(derive_stream(2, Purpose::test));
  const auto ds = testing::random_dataset(rng, 4, 3, 5);
  const auto spec = models::ModelSpec::mlp(4, 3, 3);
  ClientConfig cfg{0.3, 0.0, 1, ds.size(), 0.0};
  SUBCASE("from zero weights: exact") {
    // Zero MLP weights: use a logistic model, whose gradient at 0 is nonzero.
    const auto lspec = models::ModelSpec::logistic(4, 3);
    const numerics::ParamVector w0(lspec.param_count());
    const auto g = models::loss_and_gradient(lspec, w0, ds.view()).grad;
    const auto r = client_local_update(lspec, w0, ds, cfg, rng);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.raw_delta[i] == -0.3 * g[i]);
  }
  SUBCASE("from random weights: up to rounding") {
    const auto w = models::init_params(spec, derive_stream(3, Purpose::model_init));
    const auto g = models::loss_and_gradient(spec, w, ds.view()).grad;
    const auto r = client_local_update(spec, w, ds, cfg, rng);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.raw_delta[i] == doctest::Approx(-0.3 * g[i]).epsilon(1e-12));
  }
}

TEST_CASE("client update: FedProx with mu = 0 matches the plain path bitwise") {
  Rng drng(derive_stream(4, Purpose::test));
  const auto ds = testing::random_dataset(drng, 5, 3, 20);
  const auto spec = models::ModelSpec::mlp(5, 4, 3);
  const auto w = models::init_params(spec, derive_stream(4, Purpose::model_init));
  ClientConfig cfg{0.05, 0.9, 3, 8, 0.0};
  Rng a(derive_stream(4, Purpose::client_local)), b(derive_stream(4, Purpose::client_local));
  const auto plain = detail::client_local_update(spec, w, ds, cfg, a, false);
  const auto prox = detail::client_local_update(spec, w, ds, cfg, b, true);
  CHECK(plain.raw_delta.bitwise_equal(prox.raw_delta));

  SUBCASE("positive mu pulls the local model toward the global one") {
    ClientConfig strong = cfg;
    strong.prox_mu = 5.0;
    Rng c(derive_stream(4, Purpose::client_local));
    const auto pulled = client_local_update(spec, w, ds, strong, c);
    double n_plain = 0.0, n_prox = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      n_plain += plain.raw_delta[i] * plain.raw_delta[i];
      n_prox += pulled.raw_delta[i] * pulled.raw_delta[i];
    }
    CHECK(n_prox < n_plain);
  }
}

TEST_CASE("client update errors and config validation") {
  Rng rng(derive_stream(5, Purpose::test));
  data::Dataset empty;
  empty.num_classes = 2;
  empty.features = models::Matrix(0, 3);
  const auto spec = models::ModelSpec::logistic(3, 2);
  CHECK_THROWS_AS(client_local_update(spec, numerics::ParamVector(8), empty, ClientConfig{}, rng), DataError);
  CHECK_THROWS_AS((ClientConfig{-1.0, 0.9, 1, 1, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((ClientConfig{0.1, 1.0, 1, 1, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((ClientConfig{0.1, 0.9, 0, 1, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((ClientConfig{0.1, 0.9, 1, 0, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((ClientConfig{0.1, 0.9, 1, 1, -0.1}.validate()), ParameterError);
}

TEST_CASE("aggregate") {
  const ParamVector u{0.5, -1.0, 2.0};
  SUBCASE("single client gets weight one") {
    const auto ups = updates_from({u}, {7});
    CHECK(ups[0].weight == 1.0);
    CHECK(aggregate(ups) == u);
  }
  SUBCASE("mirrored deltas cancel") {
    CHECK(aggregate(updates_from({u, numerics::scaled(-1.0, u)})) == ParamVector(3, 0.0));
  }
  SUBCASE("weights (1,1,2) of equal deltas reproduce the delta") {
    const auto ups = updates_from({u, u, u}, {1, 1, 2});
    CHECK(ups[2].weight == 0.5);
    const auto d = aggregate(ups);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d[i] == doctest::Approx(u[i]).epsilon(1e-15));
  }
  SUBCASE("order of updates does not matter, bitwise") {
    Rng rng(derive_stream(6, Purpose::test));
    std::vector<ParamVector> ds;
    std::vector<std::size_t> counts;
    for (int i = 0; i < 6; ++i) {
      ds.push_back(numerics::sample_gaussian(rng, 0.0, 1.0, 33));
      counts.push_back(1 + rng.below(50));
    }
    auto ups = updates_from(ds, counts);
    const auto ref = aggregate(ups);
    double wsum = 0.0;
    for (const auto& up : ups) wsum += up.weight;
    CHECK(std::fabs(wsum - 1.0) < 1e-12);
    std::reverse(ups.begin(), ups.end());
    CHECK(aggregate(ups).bitwise_equal(ref));
    numerics::shuffle(ups, rng);
    CHECK(aggregate(ups).bitwise_equal(ref));
  }
  SUBCASE("length mismatch is an internal error") {
    auto ups = updates_from({u, u});
    ups[1].delta = ParamVector{1.0};
    CHECK_THROWS_AS(aggregate(ups), InternalError);
  }
  SUBCASE("all-zero sample counts") {
    CHECK_THROWS_AS(updates_from({u, u}, {0, 0}), DataError);
  }
}

TEST_CASE("agreement score") {
  std::vector<ParamVector> five;
  for (double s : {1.0, 2.0, 0.5, -1.0, -3.0}) five.push_back(ParamVector{s, s * s, 0.0});
  const auto a = agreement_score(updates_from(five));
  CHECK(a[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(a[1] == 1.0);
  CHECK(a[2] == 0.0);
  CHECK(agreement_score(updates_from({ParamVector{1.0}, ParamVector{-2.0}}))[0] == 0.0);
}

TEST_CASE("masks") {
  const ParamVector a{0.2, 0.6, 1.0};
  CHECK(gma_mask(a, 0.4) == ParamVector{0.2, 1.0, 1.0});
  CHECK(and_mask(a, 0.4) == ParamVector{0.0, 1.0, 1.0});
  CHECK(gma_mask(a, 0.0) == ParamVector(3, 1.0));
  CHECK(and_mask(ParamVector{0.0, 0.3}, 0.0) == ParamVector(2, 1.0));
  CHECK(and_mask(ParamVector{0.8, 1.0}, 1.0) == ParamVector{0.0, 1.0});
  CHECK(gma_mask(ParamVector{0.4}, 0.4) == ParamVector{1.0});
  CHECK_THROWS_AS(gma_mask(a, 1.5), ParameterError);
  CHECK_THROWS_AS(and_mask(a, -0.1), ParameterError);

  const auto ups = updates_from({ParamVector{1.0, 1.0}, ParamVector{-1.0, 1.0}});
  CHECK(compute_mask(Aggregator::avg, ups, 0.4).mask == ParamVector(2, 1.0));
  CHECK(compute_mask(Aggregator::avg, ups, 0.4).agreement == ParamVector{0.0, 1.0});
  CHECK(compute_mask(Aggregator::gma, ups, 0.4).mask == ParamVector{0.0, 1.0});
  for (auto k : {Aggregator::avg, Aggregator::gma, Aggregator::and_mask})
    CHECK(aggregator_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(aggregator_from_string("median"), ParameterError);
}

TEST_CASE("agreement stats count only moving coordinates") {
  const auto ups = updates_from({ParamVector{1.0, -1.0, 0.0, 2.0}, ParamVector{1.0, 1.0, 0.0, -2.0}});
  const auto m = compute_mask(Aggregator::gma, ups, 0.4);
  const auto s = agreement_stats(m, ups);
  CHECK(s.moving == 3);
  CHECK(s.frac_below_tau == doctest::Approx(2.0 / 3.0));
  CHECK(s.mean_agreement == doctest::Approx(1.0 / 3.0));
  CHECK(std::accumulate(s.histogram.begin(), s.histogram.end(), std::size_t{0}) == 4);
  CHECK(s.histogram[9] == 1);
  CHECK(s.histogram[0] == 3);
}

TEST_CASE("participant sampling") {
  for (std::size_t t = 1; t <= 20; ++t) {
    const auto p = sample_participants(3, t, 10, 4);
    CHECK(p.size() == 4);
    CHECK(std::is_sorted(p.begin(), p.end()));
    CHECK(std::adjacent_find(p.begin(), p.end()) == p.end());
    CHECK(p == sample_participants(3, t, 10, 4));
  }
  CHECK(sample_participants(3, 1, 6, 6) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("round: avg and gma with tau = 0 are bitwise identical") {
  const auto fed = blob_federation(7, 5, true);
  const ClientConfig cc{0.1, 0.9, 2, 8, 0.0};
  for (auto opt : {ServerOptimizerKind::fedavg, ServerOptimizerKind::fedadam, ServerOptimizerKind::fedyogi}) {
    ServerOptimizerConfig sc;
    sc.kind = opt;
    sc.lr = opt == ServerOptimizerKind::fedavg ? 1.0 : 0.05;
    const auto w0 = models::init_params(fed.spec, derive_stream(7, Purpose::model_init));
    GlobalState a{w0, ServerOptimizerState::init(sc, w0.size())};
    GlobalState g = a;
    for (std::size_t t = 1; t <= 5; ++t) {
      run_round(a, fed, RoundConfig{5, 3, Aggregator::avg, 0.0}, cc, 7, t);
      run_round(g, fed, RoundConfig{5, 3, Aggregator::gma, 0.0}, cc, 7, t);
    }
    CHECK(a.w.bitwise_equal(g.w));
  }
}

TEST_CASE("round: mirrored clients freeze the model under gma") {
  // Same input, opposite labels: at w = 0 the two gradients are exact negatives.
  data::Dataset c0, c1;
  c0.num_classes = c1.num_classes = 2;
  c0.features = c1.features = models::Matrix(1, 3);
  c0.features.values = c1.features.values = {0.2, 0.5, 0.9};
  c0.labels = {0};
  c1.labels = {1};
  Federation fed{models::ModelSpec::logistic(3, 2), {c0, c1}};
  const ClientConfig cc{0.5, 0.0, 1, 1, 0.0};

  const auto ups = run_clients(fed, ParamVector(8), std::vector<std::size_t>{0, 1}, cc, 1, 1);
  CHECK(ups[0].raw_delta == numerics::scaled(-1.0, ups[1].raw_delta));

  for (double tau : {0.1, 0.4, 1.0}) {
    GlobalState g{ParamVector(8), ServerOptimizerState::init({}, 8)};
    const auto m = run_round(g, fed, RoundConfig{2, 2, Aggregator::gma, tau}, cc, 1, 1);
    CHECK(g.w == ParamVector(8));
    CHECK(m.agreement.mean_agreement == 0.0);
    CHECK(m.agreement.frac_below_tau == 1.0);
  }
}

TEST_CASE("round: a single participant has full agreement on moving coordinates") {
  const auto fed = blob_federation(8, 4, false);
  const auto w0 = models::init_params(fed.spec, derive_stream(8, Purpose::model_init));
  GlobalState a{w0, ServerOptimizerState::init({}, w0.size())}, g = a;
  const ClientConfig cc{0.1, 0.9, 1, 8, 0.0};
  const auto m = run_round(g, fed, RoundConfig{4, 1, Aggregator::gma, 0.9}, cc, 8, 1);
  run_round(a, fed, RoundConfig{4, 1, Aggregator::avg, 0.9}, cc, 8, 1);
  CHECK(m.participants.size() == 1);
  CHECK(m.agreement.frac_below_tau == 0.0);
  CHECK(m.agreement.mean_agreement == 1.0);
  CHECK(a.w.bitwise_equal(g.w));
}

TEST_CASE("round: full participation and config errors") {
  const auto fed = blob_federation(9, 4, false);
  const auto w0 = models::init_params(fed.spec, derive_stream(9, Purpose::model_init));
  GlobalState g{w0, ServerOptimizerState::init({}, w0.size())};
  const auto m = run_round(g, fed, RoundConfig{4, 4, Aggregator::gma, 0.4}, ClientConfig{}, 9, 1);
  CHECK(m.participants == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(m.client_losses.size() == 4);
  CHECK_THROWS_AS(run_round(g, fed, RoundConfig{5, 4, Aggregator::gma, 0.4}, ClientConfig{}, 9, 1),
                  ParameterError);
  CHECK_THROWS_AS((RoundConfig{4, 5, Aggregator::gma, 0.4}.validate()), ParameterError);
  CHECK_THROWS_AS((RoundConfig{4, 0, Aggregator::gma, 0.4}.validate()), ParameterError);
  CHECK_THROWS_AS((RoundConfig{4, 2, Aggregator::gma, 1.5}.validate()), ParameterError);
}

TEST_CASE("round: client errors carry the client id") {
  auto fed = blob_federation(10, 3, false);
  fed.clients[2].labels[0] = 9;  // out of range for 4 classes
  GlobalState g{ParamVector(fed.spec.param_count()), ServerOptimizerState::init({}, fed.spec.param_count())};
  ClientConfig cc;
  cc.batch_size = 1000;
  try {
    run_round(g, fed, RoundConfig{3, 3, Aggregator::gma, 0.4}, cc, 1, 1);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("client 2") != std::string::npos);
  }
}

TEST_CASE("round: non-finite updates raise a numerical error with the round") {
  auto fed = blob_federation(11, 3, false);
  fed.clients[1].features.values[0] = std::numeric_limits<double>::infinity();
  GlobalState g{ParamVector(fed.spec.param_count()), ServerOptimizerState::init({}, fed.spec.param_count())};
  const ClientConfig cc{0.1, 0.0, 1, 1000, 0.0};
  try {
    run_round(g, fed, RoundConfig{3, 3, Aggregator::avg, 0.4}, cc, 1, 4);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(e.round() == 4);
  }
}

TEST_CASE("training: trace length, determinism, T = 0") {
  auto setup = blob_setup(12, Aggregator::gma, 0.4);
  const auto a = run_training(setup);
  const auto b = run_training(setup);
  REQUIRE(a.rounds.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.rounds[i].round == i + 1);
    CHECK(a.rounds[i].test_acc == b.rounds[i].test_acc);
    CHECK(a.rounds[i].train_loss == b.rounds[i].train_loss);
    CHECK(a.rounds[i].frac_below_tau == b.rounds[i].frac_below_tau);
    CHECK(a.rounds[i].wall_ms == 0.0);
    CHECK((a.rounds[i].test_acc >= 0.0 && a.rounds[i].test_acc <= 1.0));
  }
  CHECK(a.final_model.bitwise_equal(b.final_model));
  CHECK(a.trailing_test_acc(2) == doctest::Approx((a.rounds[3].test_acc + a.rounds[4].test_acc) / 2));
  CHECK(a.trailing_test_acc(100) ==
        doctest::Approx(std::accumulate(a.rounds.begin(), a.rounds.end(), 0.0,
                                        [](double s, const RoundRecord& r) { return s + r.test_acc; }) /
                        5.0));

  std::size_t seen = 0;
  run_training(setup, [&](const RoundRecord& r, const GlobalState&) { seen += r.round; });
  CHECK(seen == 15);

  setup.rounds = 0;
  CHECK_THROWS_AS(run_training(setup), ParameterError);
}

TEST_CASE("training: per-round agreement statistics stay in range") {
  auto setup = blob_setup(13, Aggregator::gma, 0.5);
  run_training(setup, [](const RoundRecord& r, const GlobalState&) {
    CHECK((r.frac_below_tau >= 0.0 && r.frac_below_tau <= 1.0));
    CHECK((r.mean_agreement >= 0.0 && r.mean_agreement <= 1.0));
  });
}
