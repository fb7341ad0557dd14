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

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "docsynth/error.hpp"
#include "docsynth/query.hpp"
#include "docsynth/types.hpp"
#include "docsynth/value.hpp"

namespace docsynth {

struct Example {
  Database input;
  Collection output;
};

struct SynthesisTask {
  Schema schema;
  std::string collection;
  std::vector<Example> examples;
  std::vector<Value> constants;
};

struct SynthesisConfig {
  double timeout_seconds = 300;
  int max_pipeline_depth = 6;
  int max_group_keys = 2;
  int max_predicate_atoms = 2;
  std::vector<MathFn> math_fns{MathFn::Abs, MathFn::Floor, MathFn::Ceil};
  // Ablation switches: skip the size / type half of every concretization check.
  bool disable_size_abstraction = false;
  bool disable_type_abstraction = false;
};

enum class SynthesisStatus { Solved, Timeout, Exhausted };
std::string_view to_string(SynthesisStatus s);

struct SynthesisStats {
  std::size_t sketches_explored = 0;
  std::size_t programs_completed = 0;
  std::size_t ast_size = 0;
  double elapsed_seconds = 0;
};

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::Exhausted;
  std::optional<Query> query;
  SynthesisStats stats;
};

class DeadlineExceeded : public Error {
 public:
  DeadlineExceeded() : Error("synthesis deadline exceeded") {}
};

/// Throws InputError when the task is unusable: no examples, unknown
/// collection, inputs that do not fit the schema, untypable outputs, or
/// out-of-range config bounds.
void validate_task(const SynthesisTask& task, const SynthesisConfig& cfg = {});

/// The six one-stage-deeper sketches, each inserting an operator at the leaf.
std::vector<Sketch> refine(const Sketch& sk);

/// False only if no example output concretizes any abstract result of the
/// sketch (a pruning verdict).
bool deduce(const Schema& s, const Sketch& sk, const std::vector<Example>& examples, const SynthesisConfig& cfg);

struct CompletionOptions {
  /// User constants for predicates; output primitives and {null, 0, 1} are added.
  std::vector<Value> constants;
  /// Drop the heuristic pruning (value-based filters, abstraction checks on
  /// partial pipelines, project subsets). Used to check deduction soundness.
  bool exhaustive = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Incremented once per complete program checked against the examples.
  std::size_t* programs_completed = nullptr;
};

/// First completion (in enumeration order) that reproduces every example.
/// Throws DeadlineExceeded when the deadline passes.
std::optional<Query> complete_sketch(const Schema& s, const Sketch& sk, const std::vector<Example>& examples,
                                     const SynthesisConfig& cfg, const CompletionOptions& opts = {});

/// Candidate predicates over `docs`, one per distinct truth vector: True,
/// False, comparisons (constant-major order), SizeEq, Exists, then negations
/// and binary connectives up to `cfg.max_predicate_atoms` atoms.
std::vector<Pred> enumerate_predicates(const std::vector<const Document*>& docs, const std::vector<AccessPath>& paths,
                                       const std::vector<Value>& constants, const SynthesisConfig& cfg);

SynthesisResult synthesize(const SynthesisTask& task, const SynthesisConfig& cfg = {});

}  // namespace docsynth
