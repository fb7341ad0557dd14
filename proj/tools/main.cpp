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

// docsynth: synthesize, check and benchmark document-database queries from
// input-output examples.

#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

namespace {

void add_search_flags(CLI::App* cmd, docsynth::SynthesisConfig& cfg) {
  cmd->add_option("--timeout", cfg.timeout_seconds, "Seconds before giving up")->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", cfg.max_pipeline_depth, "Longest pipeline considered")->check(CLI::PositiveNumber);
  cmd->add_option("--max-group-keys", cfg.max_group_keys, "Most group keys per Group stage")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-size-abstraction", cfg.disable_size_abstraction, "Ignore collection sizes when pruning");
  cmd->add_flag("--no-type-abstraction", cfg.disable_type_abstraction, "Ignore document types when pruning");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query synthesis for document databases from input-output examples"};
  app.require_subcommand(1);
  bool trace = false;
  app.add_flag("--trace", trace, "Log every sketch and deduction verdict");

  docsynth::cli::SynthOptions synth;
  std::string synth_task;
  std::string out_path;
  auto* s = app.add_subcommand("synth", "Synthesize a query for a task file");
  s->add_option("task", synth_task, "Task JSON")->required()->check(CLI::ExistingFile);
  add_search_flags(s, synth.cfg);
  s->add_option("--emit", synth.emit, "What to print")->check(CLI::IsMember({"dsl", "mongo", "both"}));
  s->add_option("--out", out_path, "Write the query here instead of stdout");
  s->add_flag("--trace", trace, "Log every sketch and deduction verdict");

  std::string eval_task, eval_query;
  auto* e = app.add_subcommand("eval", "Check a query against a task's examples");
  e->add_option("task", eval_task, "Task JSON")->required()->check(CLI::ExistingFile);
  e->add_option("query", eval_query, "File whose first line is the query")->required()->check(CLI::ExistingFile);

  std::string run_task, run_query;
  auto* r = app.add_subcommand("run", "Print a query's result on each example input");
  r->add_option("task", run_task, "Task JSON")->required()->check(CLI::ExistingFile);
  r->add_option("query", run_query, "Query text")->required();

  docsynth::SynthesisConfig bench_cfg;
  std::string bench_dir, csv_path;
  int jobs = 1;
  auto* b = app.add_subcommand("bench", "Run every task in a directory");
  b->add_option("dir", bench_dir, "Directory of task files")->required();
  add_search_flags(b, bench_cfg);
  b->add_option("--csv", csv_path, "Also write a CSV report");
  b->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  docsynth::cli::configure_logging(trace);

  using namespace docsynth::cli;
  if (s->parsed()) {
    if (!out_path.empty()) synth.out = out_path;
    return cmd_synth(synth_task, synth, std::cout, std::cerr);
  }
  if (e->parsed()) return cmd_eval(eval_task, eval_query, std::cout, std::cerr);
  if (r->parsed()) return cmd_run(run_task, run_query, std::cout, std::cerr);
  std::optional<std::filesystem::path> csv;
  if (!csv_path.empty()) csv = csv_path;
  return cmd_bench(bench_dir, bench_cfg, jobs, csv, std::cout, std::cerr);
}
