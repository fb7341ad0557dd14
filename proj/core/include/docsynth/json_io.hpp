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

#include <nlohmann/json.hpp>

#include "docsynth/types.hpp"
#include "docsynth/value.hpp"

namespace docsynth {

/// Insertion-ordered JSON; document attribute order survives a round trip.
using Json = nlohmann::ordered_json;

/// Extended JSON: `{"$date": "..."}` and `{"$oid": "..."}` become Datetime and
/// ObjectId. Attribute names must be non-empty and dot-free. Errors are
/// InputError carrying `where` plus the path inside `j`.
Value value_from_json(const Json& j, const std::string& where = "");
Document document_from_json(const Json& j, const std::string& where = "");
Collection collection_from_json(const Json& j, const std::string& where = "");
Database database_from_json(const Json& j, const std::string& where = "");

Json value_to_json(const Value& v);
Json document_to_json(const Document& d);
Json collection_to_json(const Collection& c);

/// Tagged type encoding: `{"kind":"num"}`, `{"kind":"array","elem":...}`, ...
ValueType type_from_json(const Json& j, const std::string& where = "");
Json type_to_json(const ValueType& t);
Schema schema_from_json(const Json& j, const std::string& where = "");
Json schema_to_json(const Schema& s);

}  // namespace docsynth
