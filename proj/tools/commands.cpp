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

#include "commands.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "docsynth/error.hpp"
#include "docsynth/eval.hpp"
#include "docsynth/mongo.hpp"
#include "docsynth/task_io.hpp"

namespace fs = std::filesystem;

namespace docsynth::cli {

namespace {

std::string first_line(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  return "";
}

std::string stats_line(const SynthesisResult& r) {
  return fmt::format("{} in {:.3f}s: {} sketches, {} completions, size {}", to_string(r.status),
                     r.stats.elapsed_seconds, r.stats.sketches_explored, r.stats.programs_completed,
                     r.stats.ast_size);
}

struct Summary {
  double avg = 0, med = 0, min = 0, max = 0;
};

Summary summarize(std::vector<double> xs) {
  Summary s;
  if (xs.empty()) return s;
  std::sort(xs.begin(), xs.end());
  double total = 0;
  for (double x : xs) total += x;
  s.avg = total / static_cast<double>(xs.size());
  std::size_t n = xs.size();
  s.med = n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
  s.min = xs.front();
  s.max = xs.back();
  return s;
}

}  // namespace

void configure_logging(bool trace) {
  auto logger = spdlog::stderr_color_mt("docsynth");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::err;
  if (const char* env = std::getenv("DOCSYNTH_LOG")) level = spdlog::level::from_str(env);
  if (trace) level = spdlog::level::trace;
  spdlog::set_level(level);
}

int cmd_synth(const fs::path& task_path, const SynthOptions& opts, std::ostream& out, std::ostream& err) {
  SynthesisTask task;
  SynthesisResult r;
  try {
    task = load_task(task_path);
    r = synthesize(task, opts.cfg);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  err << stats_line(r) << "\n";
  if (r.status == SynthesisStatus::Timeout) return kTimeout;
  if (r.status == SynthesisStatus::Exhausted) return kExhausted;

  std::string text;
  if (opts.emit == "dsl" || opts.emit == "both") text += pretty_print(*r.query) + "\n";
  if (opts.emit == "mongo" || opts.emit == "both") text += render_shell(optimize(translate(*r.query))) + "\n";
  if (opts.out) {
    std::ofstream f(*opts.out);
    if (!f) {
      err << "error: cannot write " << opts.out->string() << "\n";
      return kFailure;
    }
    f << text;
  } else {
    out << text;
  }
  return kOk;
}

int cmd_eval(const fs::path& task_path, const fs::path& query_path, std::ostream& out, std::ostream& err) {
  std::ifstream in(query_path);
  if (!in) {
    err << "error: cannot open " << query_path.string() << "\n";
    return kFailure;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    SynthesisTask task = load_task(task_path);
    validate_task(task);
    Query q = parse_query(first_line(ss.str()));
    bool all = true;
    for (std::size_t i = 0; i < task.examples.size(); ++i) {
      const auto& ex = task.examples[i];
      Collection got = eval_query(ex.input, q);
      if (same_collection(got, ex.output)) {
        out << "example " << i << ": ok\n";
      } else {
        all = false;
        out << "example " << i << ": mismatch\n  expected: " << to_display(ex.output) << "\n  actual:   "
            << to_display(got) << "\n";
      }
    }
    return all ? kOk : kFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int cmd_run(const fs::path& task_path, const std::string& query, std::ostream& out, std::ostream& err) {
  try {
    SynthesisTask task = load_task(task_path);
    Query q = parse_query(query);
    Json results = Json::array();
    for (const auto& ex : task.examples) results.push_back(collection_to_json(eval_query(ex.input, q)));
    out << results.dump(2) << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

std::size_t BenchReport::solved() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const BenchRow& r) { return r.solved(); }));
}

BenchReport run_bench(const fs::path& dir, const SynthesisConfig& cfg, int jobs) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  BenchReport report;
  report.rows.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      BenchRow& row = report.rows[i];
      row.name = files[i].stem().string();
      try {
        auto r = synthesize(load_task(files[i]), cfg);
        row.status = r.status;
        row.stats = r.stats;
        row.query = std::move(r.query);
      } catch (const Error& e) {
        row.error = e.what();
      }
      spdlog::debug("{}: {}", row.name, row.error.empty() ? std::string(to_string(row.status)) : row.error);
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

void print_report(const BenchReport& r, std::ostream& out) {
  out << fmt::format("{:<24} {:>9} {:>10} {:>10} {:>12} {:>6}\n", "task", "status", "time(s)", "sketches",
                     "completions", "size");
  std::vector<double> time, sketches, completions, size;
  for (const auto& row : r.rows) {
    std::string status = row.error.empty() ? std::string(to_string(row.status)) : "error";
    out << fmt::format("{:<24} {:>9} {:>10.3f} {:>10} {:>12} {:>6}\n", row.name, status, row.stats.elapsed_seconds,
                       row.stats.sketches_explored, row.stats.programs_completed, row.stats.ast_size);
    if (!row.solved()) continue;
    time.push_back(row.stats.elapsed_seconds);
    sketches.push_back(static_cast<double>(row.stats.sketches_explored));
    completions.push_back(static_cast<double>(row.stats.programs_completed));
    size.push_back(static_cast<double>(row.stats.ast_size));
  }
  out << fmt::format("solved {}/{}\n", r.solved(), r.rows.size());
  if (time.empty()) return;
  auto t = summarize(time), s = summarize(sketches), c = summarize(completions), z = summarize(size);
  out << fmt::format("{:<24} {:>9} {:>10.3f} {:>10.1f} {:>12.1f} {:>6.1f}\n", "avg", "", t.avg, s.avg, c.avg, z.avg);
  out << fmt::format("{:<24} {:>9} {:>10.3f} {:>10.1f} {:>12.1f} {:>6.1f}\n", "med", "", t.med, s.med, c.med, z.med);
  out << fmt::format("{:<24} {:>9} {:>10.3f} {:>10.0f} {:>12.0f} {:>6.0f}\n", "min", "", t.min, s.min, c.min, z.min);
  out << fmt::format("{:<24} {:>9} {:>10.3f} {:>10.0f} {:>12.0f} {:>6.0f}\n", "max", "", t.max, s.max, c.max, z.max);
}

void write_csv(const BenchReport& r, std::ostream& out) {
  out << "name,solved,elapsed_s,sketches,completions,ast_size\n";
  for (const auto& row : r.rows)
    out << fmt::format("{},{},{:.6f},{},{},{}\n", row.name, row.solved() ? 1 : 0, row.stats.elapsed_seconds,
                       row.stats.sketches_explored, row.stats.programs_completed, row.stats.ast_size);
}

int cmd_bench(const fs::path& dir, const SynthesisConfig& cfg, int jobs, const std::optional<fs::path>& csv,
              std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(dir)) {
    err << "error: not a directory: " << dir.string() << "\n";
    return kFailure;
  }
  BenchReport report = run_bench(dir, cfg, jobs);
  print_report(report, out);
  if (csv) {
    std::ofstream f(*csv);
    if (!f) {
      err << "error: cannot write " << csv->string() << "\n";
      return kFailure;
    }
    write_csv(report, f);
  }
  return kOk;
}

}  // namespace docsynth::cli
