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
#include <numeric>

#include "gmafed/errors.hpp"
#include "gmafed/experiments/studies.hpp"

namespace gmafed::experiments {
namespace {

using fedcore::Aggregator;

ExperimentConfig repetition_config(const StudySpec& spec, std::size_t rep) {
  ExperimentConfig cfg = spec.base;
  cfg.seed = spec.base.seed + rep;
  return cfg;
}

fedcore::TrainingTrace train(const ExperimentConfig& cfg, const DataBundle& bundle) {
  return fedcore::run_training(build_setup(cfg, bundle));
}

double mean_client_accuracy(const fedcore::Federation& fed, const numerics::ParamVector& w,
                            const std::vector<std::size_t>& ids) {
  double sum = 0.0;
  for (std::size_t id : ids) sum += models::evaluate_accuracy(fed.spec, w, fed.clients[id].view());
  return sum / static_cast<double>(ids.size());
}

double relative(double candidate, double baseline) {
  return baseline > 0.0 ? (candidate - baseline) / baseline : 0.0;
}

}  // namespace

// --- names -----------------------------------------------------------------

const std::vector<std::string>& study_kind_names() {
  static const std::vector<std::string> names{
      "convex-compare",    "agreement-homogeneity", "mask-convergence", "participation-gap",
      "tau-sweep",         "scale-sweep",           "mask-stability",   "membership-inference"};
  return names;
}

std::string to_string(StudyKind kind) { return study_kind_names()[static_cast<std::size_t>(kind)]; }

StudyKind study_kind_from_string(const std::string& name) {
  const auto& names = study_kind_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<StudyKind>(i);
  std::string valid;
  for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
  throw ParameterError("unknown study kind '" + name + "' (valid: " + valid + ")");
}

std::string to_string(ScaleAxis axis) {
  return axis == ScaleAxis::n_clients ? "n_clients" : "local_epochs";
}

ScaleAxis scale_axis_from_string(const std::string& name) {
  if (name == "n_clients") return ScaleAxis::n_clients;
  if (name == "local_epochs") return ScaleAxis::local_epochs;
  throw ParameterError("unknown scale axis '" + name + "' (valid: n_clients, local_epochs)");
}

void MaskStabilityConfig::validate() const {
  if (n_clients < 1) throw ParameterError("mask_stability.n_clients must be >= 1");
  if (means.empty() || (means.size() != 1 && means.size() != n_clients))
    throw ParameterError("mask_stability.means needs 1 or n_clients entries");
  if (!(std > 0.0)) throw ParameterError("mask_stability.std must be positive");
  if (trials < 1) throw ParameterError("mask_stability.trials must be >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ParameterError("mask_stability.tau must lie in [0, 1]");
}

void StudySpec::validate() const {
  if (repetitions < 1) throw ParameterError("study.repetitions must be >= 1");
  if (!std::is_sorted(sweep.begin(), sweep.end()))
    throw ParameterError("study.sweep must be sorted ascending");
  const bool needs_sweep = kind == StudyKind::agreement_homogeneity ||
                           kind == StudyKind::tau_sweep || kind == StudyKind::scale_sweep ||
                           kind == StudyKind::mask_stability;
  if (needs_sweep && sweep.empty()) throw ParameterError("study.sweep must not be empty");
  if (kind == StudyKind::tau_sweep)
    for (double t : sweep)
      if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("tau sweep values must lie in [0, 1]");
  if (kind == StudyKind::agreement_homogeneity)
    for (double a : sweep)
      if (!(a > 0.0)) throw ParameterError("Dirichlet concentrations must be positive");
  if (kind == StudyKind::scale_sweep)
    for (double v : sweep)
      if (!(v >= 1.0) || v != std::floor(v))
        throw ParameterError("scale sweep values must be positive integers");
  if (kind == StudyKind::mask_convergence && !(target_fraction > 0.0 && target_fraction <= 1.0))
    throw ParameterError("study.target_fraction must lie in (0, 1]");
  if (kind == StudyKind::participation_gap && base.round.sample_size >= base.round.n_clients)
    throw ParameterError(
        "participation-gap needs round.sample_size < round.n_clients (no non-participating "
        "clients otherwise)");
  if (kind == StudyKind::mask_stability) mask_stability.validate();
  if (kind == StudyKind::membership_inference && attacker_steps < 1)
    throw ParameterError("study.attacker_steps must be >= 1");
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// --- convex comparison -----------------------------------------------------

double ConvexCompareResult::median_test(bool label_skew, Aggregator arm) const {
  const auto& runs = (arm == Aggregator::gma ? gma : avg)[label_skew ? 1 : 0];
  std::vector<double> v;
  for (const auto& r : runs) v.push_back(r.test_acc);
  return median(v);
}

ConvexCompareResult convex_compare(const StudySpec& spec, const DataBundle& bundle) {
  spec.validate();
  if (spec.base.model.kind != models::ModelKind::logistic_regression)
    throw ParameterError("convex-compare requires a logistic-regression model");
  ConvexCompareResult out;
  out.avg.resize(2);
  out.gma.resize(2);
  const data::SkewKind partitions[2] = {data::SkewKind::iid, data::SkewKind::label_shard};
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      ExperimentConfig cfg = repetition_config(spec, rep);
      cfg.partition.kind = partitions[p];
      for (Aggregator arm : {Aggregator::avg, Aggregator::gma}) {
        cfg.round.aggregator = arm;
        const auto trace = train(cfg, bundle);
        const ArmResult r{trace.trailing_train_acc(cfg.trailing_window),
                          trace.trailing_test_acc(cfg.trailing_window)};
        (arm == Aggregator::avg ? out.avg : out.gma)[p].push_back(r);
      }
    }
  }
  return out;
}

// --- agreement vs homogeneity ----------------------------------------------

std::vector<AgreementPoint> agreement_homogeneity(const StudySpec& spec, const DataBundle& bundle) {
  spec.validate();
  std::vector<AgreementPoint> out;
  for (double alpha : spec.sweep) {
    AgreementPoint point{alpha, {}};
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      ExperimentConfig cfg = repetition_config(spec, rep);
      cfg.partition.kind = data::SkewKind::dirichlet_label;
      cfg.partition.concentration = alpha;
      const auto trace = train(cfg, bundle);
      double sum = 0.0;
      for (const auto& r : trace.rounds) sum += r.frac_below_tau;
      point.per_repetition.push_back(sum / static_cast<double>(trace.rounds.size()));
    }
    out.push_back(std::move(point));
  }
  return out;
}

// --- binary mask convergence -----------------------------------------------

double rounds_to_target(const fedcore::TrainingTrace& trace, double target) {
  for (const auto& r : trace.rounds)
    if (r.test_acc >= target) return static_cast<double>(r.round);
  return kNeverReached;
}

std::vector<ConvergenceRun> mask_convergence(const StudySpec& spec, const DataBundle& bundle) {
  spec.validate();
  std::vector<ConvergenceRun> out;
  for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
    ExperimentConfig cfg = repetition_config(spec, rep);
    cfg.round.aggregator = Aggregator::avg;
    const auto avg = train(cfg, bundle);
    cfg.round.aggregator = Aggregator::gma;
    const auto gma = train(cfg, bundle);
    cfg.round.aggregator = Aggregator::and_mask;
    const auto and_mask = train(cfg, bundle);

    ConvergenceRun run;
    for (const auto& r : avg.rounds) run.avg_ceiling = std::max(run.avg_ceiling, r.test_acc);
    run.target = spec.target_fraction * run.avg_ceiling;
    run.rounds_avg = rounds_to_target(avg, run.target);
    run.rounds_gma = rounds_to_target(gma, run.target);
    run.rounds_and = rounds_to_target(and_mask, run.target);
    out.push_back(run);
  }
  return out;
}

// --- participating vs non-participating ------------------------------------

std::vector<ParticipationRun> participation_gap(const StudySpec& spec, const DataBundle& bundle) {
  spec.validate();
  std::vector<ParticipationRun> out;
  for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
    const ExperimentConfig cfg = repetition_config(spec, rep);
    const fedcore::TrainingSetup setup = build_setup(cfg, bundle);
    const auto& fed = setup.federation;
    fedcore::GlobalState global{
        models::init_params(fed.spec,
                            numerics::derive_stream(cfg.seed, numerics::Purpose::model_init)),
        fedcore::ServerOptimizerState::init(cfg.server, fed.spec.param_count())};

    ParticipationRun run;
    for (std::size_t t = 1; t <= cfg.rounds; ++t) {
      const auto participants =
          fedcore::sample_participants(cfg.seed, t, cfg.round.n_clients, cfg.round.sample_size);
      std::vector<std::size_t> others;
      for (std::size_t id = 0; id < cfg.round.n_clients; ++id)
        if (!std::binary_search(participants.begin(), participants.end(), id)) others.push_back(id);

      const auto updates = fedcore::run_clients(fed, global.w, participants, cfg.client, cfg.seed, t);
      const auto delta = fedcore::aggregate(updates);

      fedcore::GlobalState avg = global, gma = global;
      const auto avg_mask = fedcore::compute_mask(Aggregator::avg, updates, cfg.round.tau);
      const auto gma_mask = fedcore::compute_mask(Aggregator::gma, updates, cfg.round.tau);
      fedcore::server_step(avg.server, avg.w, delta, avg_mask.mask, static_cast<long>(t));
      fedcore::server_step(gma.server, gma.w, delta, gma_mask.mask, static_cast<long>(t));

      ParticipationRound r;
      r.round = t;
      r.avg_participating = mean_client_accuracy(fed, avg.w, participants);
      r.avg_nonparticipating = mean_client_accuracy(fed, avg.w, others);
      r.gma_participating = mean_client_accuracy(fed, gma.w, participants);
      r.gma_nonparticipating = mean_client_accuracy(fed, gma.w, others);
      run.improvement_participating += relative(r.gma_participating, r.avg_participating);
      run.improvement_nonparticipating += relative(r.gma_nonparticipating, r.avg_nonparticipating);
      run.rounds.push_back(r);

      if (cfg.round.aggregator == Aggregator::gma) {
        global = std::move(gma);
      } else if (cfg.round.aggregator == Aggregator::avg) {
        global = std::move(avg);
      } else {
        const auto m = fedcore::compute_mask(cfg.round.aggregator, updates, cfg.round.tau);
        fedcore::server_step(global.server, global.w, delta, m.mask, static_cast<long>(t));
      }
    }
    run.improvement_participating /= static_cast<double>(cfg.rounds);
    run.improvement_nonparticipating /= static_cast<double>(cfg.rounds);
    out.push_back(std::move(run));
  }
  return out;
}

// --- tau sweep ---------------------------------------------------------------

TauSweepResult tau_sweep(const StudySpec& spec, const DataBundle& bundle) {
  spec.validate();
  TauSweepResult out;
  for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
    ExperimentConfig cfg = repetition_config(spec, rep);
    cfg.round.aggregator = Aggregator::avg;
    out.avg_baseline.push_back(train(cfg, bundle).trailing_test_acc(cfg.trailing_window));
  }
  for (double tau : spec.sweep) {
    TauPoint point{tau, {}};
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      ExperimentConfig cfg = repetition_config(spec, rep);
      cfg.round.aggregator = Aggregator::gma;
      cfg.round.tau = tau;
      point.per_repetition.push_back(train(cfg, bundle).trailing_test_acc(cfg.trailing_window));
    }
    out.points.push_back(std::move(point));
  }
  return out;
}

// --- client / epoch sweep ----------------------------------------------------

std::vector<ScalePoint> scale_sweep(const StudySpec& spec, const DataBundle& bundle) {
  spec.validate();
  std::vector<ScalePoint> out;
  for (double value : spec.sweep) {
    ScalePoint point{value, {}, {}};
    const auto v = static_cast<std::size_t>(value);
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      ExperimentConfig cfg = repetition_config(spec, rep);
      if (spec.scale_axis == ScaleAxis::n_clients) {
        cfg.round.n_clients = v;
        cfg.round.sample_size = v;
      } else {
        cfg.client.epochs = v;
      }
      for (Aggregator arm : {Aggregator::avg, Aggregator::gma}) {
        cfg.round.aggregator = arm;
        const double acc = train(cfg, bundle).trailing_test_acc(cfg.trailing_window);
        (arm == Aggregator::avg ? point.avg : point.gma).push_back(acc);
      }
    }
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace gmafed::experiments
