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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace gmafed::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitData = 2,  // also I/O failures
  kExitNumerical = 3,
};

inline constexpr const char* kDataRootEnv = "GMAFED_DATA_ROOT";

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> data_root;  // falls back to $GMAFED_DATA_ROOT, then "."
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

std::filesystem::path resolve_data_root(const std::optional<std::filesystem::path>& flag);

// Each command throws gmafed errors; run_cli maps them to exit codes.
void cmd_run(const RunOptions& opts, std::ostream& out);
void cmd_study(const RunOptions& opts, std::ostream& out);
void cmd_validate(const std::filesystem::path& config, std::ostream& out);
void cmd_version(std::ostream& out);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gmafed::cli
