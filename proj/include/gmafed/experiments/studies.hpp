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
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gmafed/experiments/config.hpp"
#include "gmafed/fedcore/aggregation.hpp"

namespace gmafed::experiments {

enum class StudyKind {
  convex_compare,
  agreement_homogeneity,
  mask_convergence,
  participation_gap,
  tau_sweep,
  scale_sweep,
  mask_stability,
  membership_inference,
};

std::string to_string(StudyKind kind);
StudyKind study_kind_from_string(const std::string& name);  // lists valid kinds on error
const std::vector<std::string>& study_kind_names();

enum class ScaleAxis { n_clients, local_epochs };
std::string to_string(ScaleAxis axis);
ScaleAxis scale_axis_from_string(const std::string& name);

struct MaskStabilityConfig {
  std::vector<double> means{1.0};  // mu^n; a single value is broadcast to all clients
  double std = 0.2;
  std::size_t n_clients = 10;
  std::size_t trials = 10000;
  double tau = 0.4;

  void validate() const;
  friend bool operator==(const MaskStabilityConfig&, const MaskStabilityConfig&) = default;
};

struct StudySpec {
  StudyKind kind = StudyKind::convex_compare;
  // tau values, Dirichlet alphas, client counts, epoch counts or mean/std
  // ratios, depending on the study. Must be sorted ascending.
  std::vector<double> sweep;
  std::size_t repetitions = 3;
  ExperimentConfig base;

  double target_fraction = 0.9;  // mask-convergence: target = fraction * AVG ceiling
  ScaleAxis scale_axis = ScaleAxis::local_epochs;
  MaskStabilityConfig mask_stability;
  std::size_t attacker_steps = 5000;

  void validate() const;  // throws ParameterError
  friend bool operator==(const StudySpec&, const StudySpec&) = default;
};

inline constexpr double kNeverReached = std::numeric_limits<double>::infinity();

// Tabular study output. `rows` is the headline table; `runs` keeps one row
// per (sweep point, repetition, arm) for medians and audits.
using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

struct StudyReport {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::string> run_columns;
  std::vector<Row> runs;
  std::map<std::string, double> summary;
};

double median(std::vector<double> values);

// --- convex comparison --------------------------------------------------

struct ArmResult {
  double train_acc = 0.0;  // trailing-window means
  double test_acc = 0.0;
};

struct ConvexCompareResult {
  // [partition][repetition] for each arm; partitions are iid then label-shard.
  std::vector<std::vector<ArmResult>> avg, gma;
  double median_test(bool label_skew, fedcore::Aggregator arm) const;
};

ConvexCompareResult convex_compare(const StudySpec& spec, const DataBundle& bundle);

// --- agreement vs homogeneity ---------------------------------------------

struct AgreementPoint {
  double alpha = 0.0;
  std::vector<double> per_repetition;  // mean over rounds of frac(A < tau)
};

std::vector<AgreementPoint> agreement_homogeneity(const StudySpec& spec, const DataBundle& bundle);

// --- binary mask convergence ---------------------------------------------

struct ConvergenceRun {
  double avg_ceiling = 0.0;
  double target = 0.0;
  // First 1-based round with test accuracy >= target, or kNeverReached.
  double rounds_avg = kNeverReached, rounds_gma = kNeverReached, rounds_and = kNeverReached;
};

std::vector<ConvergenceRun> mask_convergence(const StudySpec& spec, const DataBundle& bundle);

// First 1-based round whose test accuracy reaches `target`, else kNeverReached.
double rounds_to_target(const fedcore::TrainingTrace& trace, double target);

// --- participating vs non-participating ----------------------------------

struct ParticipationRound {
  std::size_t round = 0;
  double avg_participating = 0.0, avg_nonparticipating = 0.0;
  double gma_participating = 0.0, gma_nonparticipating = 0.0;
};

struct ParticipationRun {
  std::vector<ParticipationRound> rounds;
  // Relative improvement of GMA over AVG, (gma - avg) / avg, averaged over rounds.
  double improvement_participating = 0.0;
  double improvement_nonparticipating = 0.0;
};

// Follows the base aggregator's trajectory; in every round both the AVG and
// the GMA candidate updates are built from the same client updates and
// evaluated on the data of sampled and unsampled clients.
std::vector<ParticipationRun> participation_gap(const StudySpec& spec, const DataBundle& bundle);

// --- tau sweep -----------------------------------------------------------

struct TauPoint {
  double tau = 0.0;
  std::vector<double> per_repetition;  // trailing test accuracy
};

struct TauSweepResult {
  std::vector<TauPoint> points;
  std::vector<double> avg_baseline;  // per repetition
};

TauSweepResult tau_sweep(const StudySpec& spec, const DataBundle& bundle);

// --- client / epoch sweep -------------------------------------------------

struct ScalePoint {
  double value = 0.0;
  std::vector<double> avg, gma;  // trailing test accuracy per repetition
};

std::vector<ScalePoint> scale_sweep(const StudySpec& spec, const DataBundle& bundle);

// --- mask stability -------------------------------------------------------

// Fraction of trials in which the binary mask of one coordinate is 1, with
// client deltas drawn from Normal(mu^n, std^2).
double mask_stability_mc(const MaskStabilityConfig& cfg, numerics::Rng& rng);

// For each ratio r in `ratios`, runs the Monte Carlo with every mean set to
// r * cfg.std. Each point gets its own substream.
std::vector<double> mask_stability_grid(const MaskStabilityConfig& cfg,
                                        const std::vector<double>& ratios, std::uint64_t seed);

// --- membership inference ------------------------------------------------

struct AttackResult {
  double accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

// Trains a binary logistic-regression attacker on the target model's logits
// (sorted descending, so the attacker does not need the label), members
// labelled 1 and non-members 0. Both groups are truncated to the same size
// and split in halves for attacker training and evaluation. Throws DataError
// when either group has fewer than 2 samples.
AttackResult membership_inference(const models::ModelSpec& spec, const numerics::ParamVector& w,
                                  const data::Dataset& members, const data::Dataset& non_members,
                                  numerics::Rng& rng, std::size_t steps = 5000);

// Per-arm attack on models trained with the base config.
std::map<std::string, std::vector<double>> membership_study(const StudySpec& spec,
                                                            const DataBundle& bundle);

// Runs the study and converts it into a table.
StudyReport run_study(const StudySpec& spec, const DataBundle& bundle);

}  // namespace gmafed::experiments
