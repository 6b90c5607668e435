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

#include <cmath>
#include <numeric>

#include "gmafed/errors.hpp"
#include "gmafed/experiments/studies.hpp"

namespace gmafed::experiments {
namespace {

using fedcore::Aggregator;

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double seed_of(const StudySpec& spec, std::size_t rep) {
  return static_cast<double>(spec.base.seed + rep);
}

StudyReport convex_report(const StudySpec& spec, const DataBundle& bundle) {
  const auto res = convex_compare(spec, bundle);
  StudyReport rep;
  rep.columns = {"partition", "aggregator", "train_acc_median", "test_acc_median"};
  rep.run_columns = {"partition", "aggregator", "seed", "train_acc", "test_acc"};
  const char* names[2] = {"iid", "label-shard"};
  for (std::size_t p = 0; p < 2; ++p) {
    for (Aggregator arm : {Aggregator::avg, Aggregator::gma}) {
      const auto& runs = (arm == Aggregator::avg ? res.avg : res.gma)[p];
      std::vector<double> tr, te;
      for (std::size_t r = 0; r < runs.size(); ++r) {
        tr.push_back(runs[r].train_acc);
        te.push_back(runs[r].test_acc);
        rep.runs.push_back({names[p], fedcore::to_string(arm), seed_of(spec, r), runs[r].train_acc,
                            runs[r].test_acc});
      }
      rep.rows.push_back({names[p], fedcore::to_string(arm), median(tr), median(te)});
    }
  }
  rep.summary["iid_avg_test_median"] = res.median_test(false, Aggregator::avg);
  rep.summary["iid_gma_test_median"] = res.median_test(false, Aggregator::gma);
  rep.summary["label_skew_avg_test_median"] = res.median_test(true, Aggregator::avg);
  rep.summary["label_skew_gma_test_median"] = res.median_test(true, Aggregator::gma);
  return rep;
}

StudyReport agreement_report(const StudySpec& spec, const DataBundle& bundle) {
  StudyReport rep;
  rep.columns = {"alpha", "fraction_below_tau_mean", "fraction_below_tau_std"};
  rep.run_columns = {"alpha", "seed", "fraction_below_tau"};
  for (const auto& pt : agreement_homogeneity(spec, bundle)) {
    rep.rows.push_back({pt.alpha, mean_of(pt.per_repetition), std_of(pt.per_repetition)});
    for (std::size_t r = 0; r < pt.per_repetition.size(); ++r)
      rep.runs.push_back({pt.alpha, seed_of(spec, r), pt.per_repetition[r]});
  }
  return rep;
}

StudyReport convergence_report(const StudySpec& spec, const DataBundle& bundle) {
  const auto runs = mask_convergence(spec, bundle);
  StudyReport rep;
  rep.columns = {"aggregator", "rounds_to_target_median"};
  rep.run_columns = {"seed", "avg_ceiling", "target", "rounds_avg", "rounds_gma", "rounds_and"};
  std::vector<double> a, g, m;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    rep.runs.push_back({seed_of(spec, r), run.avg_ceiling, run.target, run.rounds_avg,
                        run.rounds_gma, run.rounds_and});
    a.push_back(run.rounds_avg);
    g.push_back(run.rounds_gma);
    m.push_back(run.rounds_and);
  }
  rep.rows.push_back({"avg", median(a)});
  rep.rows.push_back({"gma", median(g)});
  rep.rows.push_back({"and-mask", median(m)});
  rep.summary["rounds_avg_median"] = median(a);
  rep.summary["rounds_gma_median"] = median(g);
  rep.summary["rounds_and_median"] = median(m);
  return rep;
}

StudyReport participation_report(const StudySpec& spec, const DataBundle& bundle) {
  const auto runs = participation_gap(spec, bundle);
  StudyReport rep;
  rep.columns = {"round", "avg_participating", "avg_nonparticipating", "gma_participating",
                 "gma_nonparticipating"};
  rep.run_columns = {"seed", "improvement_participating", "improvement_nonparticipating"};
  // Per-round means across repetitions.
  const std::size_t rounds = runs.front().rounds.size();
  for (std::size_t t = 0; t < rounds; ++t) {
    double ap = 0, an = 0, gp = 0, gn = 0;
    for (const auto& run : runs) {
      ap += run.rounds[t].avg_participating;
      an += run.rounds[t].avg_nonparticipating;
      gp += run.rounds[t].gma_participating;
      gn += run.rounds[t].gma_nonparticipating;
    }
    const double n = static_cast<double>(runs.size());
    rep.rows.push_back({static_cast<double>(t + 1), ap / n, an / n, gp / n, gn / n});
  }
  std::vector<double> ip, in;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    rep.runs.push_back({seed_of(spec, r), runs[r].improvement_participating,
                        runs[r].improvement_nonparticipating});
    ip.push_back(runs[r].improvement_participating);
    in.push_back(runs[r].improvement_nonparticipating);
  }
  rep.summary["improvement_participating_median"] = median(ip);
  rep.summary["improvement_nonparticipating_median"] = median(in);
  return rep;
}

StudyReport tau_report(const StudySpec& spec, const DataBundle& bundle) {
  const auto res = tau_sweep(spec, bundle);
  StudyReport rep;
  rep.columns = {"tau", "test_acc_mean", "test_acc_std", "test_acc_median"};
  rep.run_columns = {"tau", "seed", "test_acc"};
  double best = -1.0;
  for (const auto& pt : res.points) {
    const double med = median(pt.per_repetition);
    rep.rows.push_back({pt.tau, mean_of(pt.per_repetition), std_of(pt.per_repetition), med});
    for (std::size_t r = 0; r < pt.per_repetition.size(); ++r)
      rep.runs.push_back({pt.tau, seed_of(spec, r), pt.per_repetition[r]});
    if (med > best) {
      best = med;
      rep.summary["best_tau"] = pt.tau;
    }
  }
  for (std::size_t r = 0; r < res.avg_baseline.size(); ++r)
    rep.runs.push_back({"avg", seed_of(spec, r), res.avg_baseline[r]});
  rep.summary["avg_baseline_median"] = median(res.avg_baseline);
  return rep;
}

StudyReport scale_report(const StudySpec& spec, const DataBundle& bundle) {
  StudyReport rep;
  const std::string axis = to_string(spec.scale_axis);
  rep.columns = {axis, "avg_test_acc_median", "gma_test_acc_median"};
  rep.run_columns = {axis, "seed", "avg_test_acc", "gma_test_acc"};
  for (const auto& pt : scale_sweep(spec, bundle)) {
    rep.rows.push_back({pt.value, median(pt.avg), median(pt.gma)});
    for (std::size_t r = 0; r < pt.avg.size(); ++r)
      rep.runs.push_back({pt.value, seed_of(spec, r), pt.avg[r], pt.gma[r]});
  }
  return rep;
}

StudyReport stability_report(const StudySpec& spec) {
  StudyReport rep;
  rep.columns = {"mean_over_std", "unmask_frequency"};
  const auto freq = mask_stability_grid(spec.mask_stability, spec.sweep, spec.base.seed);
  for (std::size_t i = 0; i < freq.size(); ++i) rep.rows.push_back({spec.sweep[i], freq[i]});
  return rep;
}

StudyReport membership_report(const StudySpec& spec, const DataBundle& bundle) {
  const auto res = membership_study(spec, bundle);
  StudyReport rep;
  rep.columns = {"aggregator", "attack_acc_median"};
  rep.run_columns = {"aggregator", "seed", "attack_acc"};
  for (const auto& [arm, accs] : res) {
    rep.rows.push_back({arm, median(accs)});
    for (std::size_t r = 0; r < accs.size(); ++r) rep.runs.push_back({arm, seed_of(spec, r), accs[r]});
    rep.summary[arm + "_attack_acc_median"] = median(accs);
  }
  return rep;
}

}  // namespace

std::map<std::string, std::vector<double>> membership_study(const StudySpec& spec,
                                                            const DataBundle& bundle) {
  spec.validate();
  std::map<std::string, std::vector<double>> out;
  for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
    ExperimentConfig cfg = spec.base;
    cfg.seed = spec.base.seed + rep;
    for (Aggregator arm : {Aggregator::avg, Aggregator::gma}) {
      cfg.round.aggregator = arm;
      const auto setup = build_setup(cfg, bundle);
      const auto trace = fedcore::run_training(setup);
      numerics::Rng rng(numerics::derive_stream(cfg.seed, numerics::Purpose::attacker,
                                                static_cast<std::uint64_t>(arm)));
      const auto res = membership_inference(setup.federation.spec, trace.final_model,
                                            setup.train_eval, setup.test, rng,
                                            spec.attacker_steps);
      out[fedcore::to_string(arm)].push_back(res.accuracy);
    }
  }
  return out;
}

StudyReport run_study(const StudySpec& spec, const DataBundle& bundle) {
  spec.validate();
  StudyReport rep;
  switch (spec.kind) {
    case StudyKind::convex_compare: rep = convex_report(spec, bundle); break;
    case StudyKind::agreement_homogeneity: rep = agreement_report(spec, bundle); break;
    case StudyKind::mask_convergence: rep = convergence_report(spec, bundle); break;
    case StudyKind::participation_gap: rep = participation_report(spec, bundle); break;
    case StudyKind::tau_sweep: rep = tau_report(spec, bundle); break;
    case StudyKind::scale_sweep: rep = scale_report(spec, bundle); break;
    case StudyKind::mask_stability: rep = stability_report(spec); break;
    case StudyKind::membership_inference: rep = membership_report(spec, bundle); break;
  }
  rep.kind = to_string(spec.kind);
  return rep;
}

}  // namespace gmafed::experiments
