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

#include "gmafed/cli/commands.hpp"

#include <cstdlib>

#include <CLI11.hpp>

#include "gmafed/cli/config_io.hpp"
#include "gmafed/cli/output.hpp"
#include "gmafed/errors.hpp"
#include "gmafed/numerics/kernels.hpp"

#ifndef GMAFED_VERSION
#define GMAFED_VERSION "unknown"
#endif

namespace gmafed::cli {
namespace {

void apply_overrides(const RunOptions& opts, experiments::ExperimentConfig& cfg) {
  if (opts.output_dir) cfg.output_dir = opts.output_dir->string();
  if (opts.seed) cfg.seed = *opts.seed;
}

}  // namespace

std::filesystem::path resolve_data_root(const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kDataRootEnv); env && *env) return env;
  return ".";
}

void cmd_run(const RunOptions& opts, std::ostream& out) {
  auto cfg = parse_config(opts.config);
  apply_overrides(opts, cfg);
  const std::filesystem::path dir = cfg.output_dir;
  prepare_output_dir(dir);

  const auto bundle = experiments::load_data(cfg.dataset, cfg.seed, resolve_data_root(opts.data_root));
  auto setup = experiments::build_setup(cfg, bundle);
  setup.record_timing = opts.timing;
  const auto trace = fedcore::run_training(setup);

  write_file_atomic(dir / "config.resolved.json", to_json(cfg).dump(2) + "\n");
  write_file_atomic(dir / "metrics.csv", metrics_csv(trace));
  write_file_atomic(dir / "summary.json", run_summary(cfg, trace).dump(2) + "\n");
  out << "wrote " << (dir / "metrics.csv").string() << " (" << trace.rounds.size()
      << " rounds, trailing test acc "
      << format_number(trace.trailing_test_acc(cfg.trailing_window)) << ")\n";
}

void cmd_study(const RunOptions& opts, std::ostream& out) {
  auto spec = parse_study(opts.config);
  apply_overrides(opts, spec.base);
  const std::filesystem::path dir = spec.base.output_dir;
  prepare_output_dir(dir);

  experiments::DataBundle bundle;
  if (spec.kind != experiments::StudyKind::mask_stability)
    bundle = experiments::load_data(spec.base.dataset, spec.base.seed,
                                    resolve_data_root(opts.data_root));
  const auto report = experiments::run_study(spec, bundle);

  write_file_atomic(dir / "study.csv", report_csv(report.columns, report.rows));
  if (!report.run_columns.empty())
    write_file_atomic(dir / "study_runs.csv", report_csv(report.run_columns, report.runs));
  write_file_atomic(dir / "study.json", report_json(report, spec).dump(2) + "\n");
  out << "wrote " << (dir / "study.csv").string() << " (" << report.kind << ", "
      << report.rows.size() << " rows)\n";
}

void cmd_validate(const std::filesystem::path& config, std::ostream& out) {
  const Json doc = read_json_file(config);
  if (is_study_document(doc)) {
    const auto spec = study_from_json(doc);
    out << "ok: study config (" << experiments::to_string(spec.kind) << ")\n";
  } else {
    experiment_from_json(doc);
    out << "ok: experiment config\n";
  }
}

void cmd_version(std::ostream& out) {
  out << "gmafed " << GMAFED_VERSION << " (kernels: " << numerics::kernels::active_name() << ")\n";
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated learning simulator with gradient masked averaging"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string data_root, output_dir;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opts.config, "JSON config file")->required();
    sub->add_option("--data-root", data_root,
                    std::string("dataset root directory (default: $") + kDataRootEnv + " or .)");
    sub->add_option("--output-dir", output_dir, "override the config's output_dir");
    sub->add_option("--seed", seed, "override the config's seed");
  };
  auto* run = app.add_subcommand("run", "train one experiment and write metrics");
  add_common(run);
  run->add_flag("--timing", opts.timing, "record per-round wall-clock time (breaks byte-identical CSVs)");
  auto* study = app.add_subcommand("study", "run a study and write its report");
  add_common(study);
  auto* validate = app.add_subcommand("validate", "parse and check a config without running it");
  validate->add_option("config", opts.config, "JSON config file")->required();
  app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }
  for (auto* sub : {run, study}) {
    if (sub->count("--data-root")) opts.data_root = data_root;
    if (sub->count("--output-dir")) opts.output_dir = output_dir;
    if (sub->count("--seed")) opts.seed = seed;
  }

  try {
    if (*run) cmd_run(opts, out);
    else if (*study) cmd_study(opts, out);
    else if (*validate) cmd_validate(opts.config, out);
    else cmd_version(out);
    return kExitOk;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace gmafed::cli
