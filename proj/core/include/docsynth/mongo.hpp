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

#include "docsynth/json_io.hpp"
#include "docsynth/query.hpp"
#include "docsynth/value.hpp"

namespace docsynth {

/// An aggregation pipeline: one single-key `$`-operator document per stage.
struct Pipeline {
  std::string collection;
  std::vector<Document> stages;
};

/// One stage per operator, innermost first.
Pipeline translate(const Query& q);

/// Merges adjacent $addFields, composable adjacent $project pairs, and an
/// $addFields whose fields a following $project keeps.
Pipeline optimize(Pipeline p);

/// `db.<coll>.aggregate([...])`, one stage per line.
std::string render_shell(const Pipeline& p);

/// JSON array of stages; scalars use the extended-JSON tags.
Json pipeline_to_json(const Pipeline& p);

/// Maps a pipeline produced by translate/optimize back to a query so that
/// optimized pipelines can be replayed through the interpreter. Throws Error
/// on stage shapes translate never emits.
Query to_query(const Pipeline& p);

}  // namespace docsynth
