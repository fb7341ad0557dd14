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

#include <benchmark/benchmark.h>

#include <filesystem>

#include "docsynth/abstract_eval.hpp"
#include "docsynth/eval.hpp"
#include "docsynth/mongo.hpp"
#include "docsynth/synthesizer.hpp"
#include "docsynth/task_io.hpp"
#include "fixtures.hpp"

using namespace docsynth;

namespace {

const std::filesystem::path kTasks = std::filesystem::path(DOCSYNTH_DATA_DIR) / "tasks";

void BM_EvalForumPipeline(benchmark::State& state) {
  Database db = fixtures::posts_db();
  Query q = parse_query(fixtures::kPostsQuery);
  for (auto _ : state) benchmark::DoNotOptimize(eval_query(db, q));
}
BENCHMARK(BM_EvalForumPipeline);

void BM_AbsEvalForumSketch(benchmark::State& state) {
  Database db = fixtures::posts_db();
  auto adb = abstract_db_of(db, compute_schema(db));
  DocumentType out{{"reply_count", ValueType::num()}, {"title", ValueType::str()}};
  Sketch sk = skeleton(parse_query(fixtures::kPostsQuery));
  for (auto _ : state) benchmark::DoNotOptimize(abs_eval(adb, out, sk));
}
BENCHMARK(BM_AbsEvalForumSketch);

// Chain of alternating relations; length is the argument.
void BM_SizeSat(benchmark::State& state) {
  const SizeRel rels[] = {SizeRel::Ge, SizeRel::Lt, SizeRel::Le, SizeRel::Eq};
  SizeFormula f = SizeFormula::grounded(7);
  for (int i = 0; i < state.range(0); ++i) f = f.extend(rels[i % 4]);
  SizeProbe probe{static_cast<int>(state.range(0)), 2};
  for (auto _ : state) benchmark::DoNotOptimize(is_sat(f, probe));
}
BENCHMARK(BM_SizeSat)->Arg(2)->Arg(8)->Arg(32);

void BM_Translate(benchmark::State& state) {
  Query q = parse_query(fixtures::kPostsQuery);
  for (auto _ : state) benchmark::DoNotOptimize(render_shell(optimize(translate(q))));
}
BENCHMARK(BM_Translate);

void BM_Synthesize(benchmark::State& state, const char* name) {
  auto task = load_task(kTasks / (std::string(name) + ".json"));
  for (auto _ : state) {
    auto r = synthesize(task);
    if (!r.query) state.SkipWithError("not solved");
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK_CAPTURE(BM_Synthesize, unwind_pairs, "unwind_pairs")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Synthesize, big_spenders, "big_spenders")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Synthesize, reddit_posts, "reddit_posts")->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
