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

#include <json.hpp>

#include "gmafed/errors.hpp"
#include "gmafed/experiments/config.hpp"
#include "gmafed/experiments/studies.hpp"

namespace gmafed::cli {

using Json = nlohmann::ordered_json;

// Every problem found in a config file, each prefixed by its field path.
class ConfigError : public ParameterError {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Missing keys take their defaults; unknown keys are errors.
experiments::ExperimentConfig experiment_from_json(const Json& j);
Json to_json(const experiments::ExperimentConfig& cfg);

// Study files hold {"study": {...}, "experiment": {...}}.
experiments::StudySpec study_from_json(const Json& j);
Json to_json(const experiments::StudySpec& spec);

Json read_json_file(const std::filesystem::path& path);  // throws ConfigError
experiments::ExperimentConfig parse_config(const std::filesystem::path& path);
experiments::StudySpec parse_study(const std::filesystem::path& path);

// True when the document looks like a study file (has a top-level "study").
bool is_study_document(const Json& j);

}  // namespace gmafed::cli
