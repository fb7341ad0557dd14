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

#include <string>
#include <vector>

#include "docsynth/abstraction.hpp"
#include "docsynth/query.hpp"

namespace docsynth {

struct AbsEvalOptions {
  /// Largest Group key set considered (subsets of top-level attributes).
  int max_group_keys = 2;
};

/// Size-variable index per pipeline position: the collection is 0 and each
/// enclosing stage the next integer, so `ids[i] == i` and the outermost
/// stage gets `sk.depth()`.
std::vector<int> assign_ids(const Sketch& sk);

/// Array-typed attributes reachable through documents only (never through
/// another array), in lexicographic path order.
std::vector<AccessPath> unwindable_paths(const DocumentType& t);

/// All abstract collections the sketch may evaluate to. Deduplicated by type
/// equivalence; every result carries the same formula.
std::vector<AbstractCollection> abs_eval(const AbstractDatabase& adb, const DocumentType& out_type, const Sketch& sk,
                                         const AbsEvalOptions& opts = {});

/// Continues abstract evaluation from `start` through `ops` (innermost
/// first). Stage ids, and so fresh placeholder labels, continue after the
/// start's result variable.
std::vector<AbstractCollection> abs_eval_from(const AbstractDatabase& adb, const DocumentType& out_type,
                                              const AbstractCollection& start, const std::vector<OpKind>& ops,
                                              const AbsEvalOptions& opts = {});

/// `{(τ̂, φ), ...}` for trace logging.
std::string lambda_text(const std::vector<AbstractCollection>& lambda);

}  // namespace docsynth
