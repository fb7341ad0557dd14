/* Copyright 2026 The docsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "docsynth/synthesizer.hpp"

namespace docsynth::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kTimeout = 2, kExhausted = 3 };

/// Reads DOCSYNTH_LOG (error|info|trace, default error); `trace` forces trace.
void configure_logging(bool trace);

struct SynthOptions {
  SynthesisConfig cfg;
  std::string emit = "both";  // dsl | mongo | both
  std::optional<std::filesystem::path> out;
};

int cmd_synth(const std::filesystem::path& task, const SynthOptions& opts, std::ostream& out, std::ostream& err);

/// The query file's first non-empty line is the query, so `synth --emit both`
/// output can be fed back in directly.
int cmd_eval(const std::filesystem::path& task, const std::filesystem::path& query, std::ostream& out,
             std::ostream& err);

/// Prints the query's result on every example input as JSON.
int cmd_run(const std::filesystem::path& task, const std::string& query, std::ostream& out, std::ostream& err);

struct BenchRow {
  std::string name;
  SynthesisStatus status = SynthesisStatus::Exhausted;
  std::string error;  // task could not be loaded
  SynthesisStats stats;
  std::optional<Query> query;
  bool solved() const { return status == SynthesisStatus::Solved && query.has_value(); }
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::size_t solved() const;
};

/// Every `*.json` task in `dir`, ordered by file name.
BenchReport run_bench(const std::filesystem::path& dir, const SynthesisConfig& cfg, int jobs = 1);
void print_report(const BenchReport& r, std::ostream& out);
void write_csv(const BenchReport& r, std::ostream& out);

int cmd_bench(const std::filesystem::path& dir, const SynthesisConfig& cfg, int jobs,
              const std::optional<std::filesystem::path>& csv, std::ostream& out, std::ostream& err);

}  // namespace docsynth::cli
