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

#include <vector>

#include "docsynth/query.hpp"
#include "docsynth/value.hpp"

namespace docsynth {

/// Reference interpreter. Throws UnknownCollection and UnwindNonArray.
Collection eval_query(const Database& db, const Query& q);

/// One pipeline stage applied to `in`; `db` supplies Lookup's foreign side.
Collection eval_stage(const Database& db, const Collection& in, const Stage& s);

/// Absent paths compare like null: `<`/`>` are false, `= null` holds.
bool eval_pred(const Document& d, const Pred& p);

/// Null on absent or non-numeric operands and on division by zero.
Value eval_expr(const Document& d, const Expr& e);

Value eval_agg(const std::vector<const Document*>& docs, const Agg& a);
Value eval_agg(const Collection& docs, const Agg& a);

/// Rebuilds the nested structure along each path; absent paths are skipped.
Document extract_attrs(const Document& d, const std::vector<AccessPath>& hs);

/// Writes each value at its path, creating intermediate documents. Existing
/// attributes are never overwritten.
Document add_attrs(Document d, const std::vector<AccessPath>& hs, const std::vector<Value>& vs);

/// One document per element of the array at h. Absent or null h gives no
/// documents; any other non-array throws UnwindNonArray.
Collection flatten(const Document& d, const AccessPath& h);

/// The `_id` document of a group: each key's value under its last segment.
/// Absent keys are omitted. Throws Error if two keys share a last segment.
Document group_key(const Document& d, const std::vector<AccessPath>& keys);

}  // namespace docsynth
