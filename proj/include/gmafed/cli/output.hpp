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

#include <filesystem>
#include <string>
#include <vector>

#include "gmafed/cli/config_io.hpp"
#include "gmafed/experiments/studies.hpp"
#include "gmafed/fedcore/training.hpp"

namespace gmafed::cli {

// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

inline const std::vector<std::string> kMetricsColumns{
    "round",    "train_acc",   "test_acc",      "train_loss", "test_loss", "frac_agreement_below_tau",
    "mean_agreement", "wall_ms"};

std::string metrics_csv(const fedcore::TrainingTrace& trace);
Json run_summary(const experiments::ExperimentConfig& cfg, const fedcore::TrainingTrace& trace);

std::string report_csv(const std::vector<std::string>& columns,
                       const std::vector<experiments::Row>& rows);
Json report_json(const experiments::StudyReport& report, const experiments::StudySpec& spec);

// Creates `dir` if needed and checks a file can be created in it. Throws IoError.
void prepare_output_dir(const std::filesystem::path& dir);

// Writes via a temporary sibling and renames, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace gmafed::cli
