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

#include "gmafed/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "gmafed/errors.hpp"

namespace gmafed::cli {
namespace {

Json cell_json(const experiments::Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double d = std::get<double>(c);
  // JSON has no infinity; the never-reached sentinel becomes null.
  if (!std::isfinite(d)) return nullptr;
  return d;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string metrics_csv(const fedcore::TrainingTrace& trace) {
  std::string out;
  for (std::size_t i = 0; i < kMetricsColumns.size(); ++i)
    out += (i ? "," : "") + kMetricsColumns[i];
  out += '\n';
  for (const auto& r : trace.rounds) {
    out += std::to_string(r.round);
    for (double v : {r.train_acc, r.test_acc, r.train_loss, r.test_loss, r.frac_below_tau,
                     r.mean_agreement, r.wall_ms})
      out += "," + format_number(v);
    out += '\n';
  }
  return out;
}

Json run_summary(const experiments::ExperimentConfig& cfg, const fedcore::TrainingTrace& trace) {
  const auto& last = trace.rounds.back();
  return Json{{"rounds", trace.rounds.size()},
              {"final",
               {{"train_acc", last.train_acc},
                {"test_acc", last.test_acc},
                {"train_loss", last.train_loss},
                {"test_loss", last.test_loss}}},
              {"trailing_window", cfg.trailing_window},
              {"trailing_train_acc", trace.trailing_train_acc(cfg.trailing_window)},
              {"trailing_test_acc", trace.trailing_test_acc(cfg.trailing_window)},
              {"aggregator", fedcore::to_string(cfg.round.aggregator)},
              {"seed", cfg.seed}};
}

std::string report_csv(const std::vector<std::string>& columns,
                       const std::vector<experiments::Row>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* s = std::get_if<std::string>(&row[i]))
        out += csv_field(*s);
      else
        out += format_number(std::get<double>(row[i]));
    }
    out += '\n';
  }
  return out;
}

Json report_json(const experiments::StudyReport& report, const experiments::StudySpec& spec) {
  auto table = [](const std::vector<std::string>& cols, const std::vector<experiments::Row>& rows) {
    Json out = Json::array();
    for (const auto& row : rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < cols.size() && i < row.size(); ++i) obj[cols[i]] = cell_json(row[i]);
      out.push_back(std::move(obj));
    }
    return out;
  };
  Json summary = Json::object();
  for (const auto& [k, v] : report.summary) summary[k] = cell_json(v);
  return Json{{"kind", report.kind},
              {"columns", report.columns},
              {"rows", table(report.columns, report.rows)},
              {"run_columns", report.run_columns},
              {"runs", table(report.run_columns, report.runs)},
              {"summary", summary},
              {"spec", to_json(spec)}};
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": cannot create output directory: " + ec.message());
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + ": not a directory");
  const auto probe = dir / ".gmafed-write-probe";
  {
    std::ofstream out(probe, std::ios::binary);
    if (!out) throw IoError(dir.string() + ": output directory is not writable");
  }
  std::filesystem::remove(probe, ec);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError(tmp.string() + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError(path.string() + ": cannot move finished file into place");
  }
}

}  // namespace gmafed::cli
