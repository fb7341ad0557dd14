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

#include "docsynth/task_io.hpp"

#include <fstream>

#include "docsynth/error.hpp"

namespace docsynth {

SynthesisTask task_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("", "task must be a JSON object");
  SynthesisTask t;
  if (!j.contains("collection") || !j["collection"].is_string()) throw InputError("/collection", "expected a string");
  t.collection = j["collection"].get<std::string>();

  if (j.contains("constants")) {
    const auto& cs = j["constants"];
    if (!cs.is_array()) throw InputError("/constants", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) t.constants.push_back(value_from_json(cs[i], "/constants/" + std::to_string(i)));
  }

  if (!j.contains("examples") || !j["examples"].is_array()) throw InputError("/examples", "expected an array");
  const auto& exs = j["examples"];
  for (std::size_t i = 0; i < exs.size(); ++i) {
    std::string where = "/examples/" + std::to_string(i);
    const auto& e = exs[i];
    if (!e.is_object() || !e.contains("input") || !e.contains("output"))
      throw InputError(where, "expected {input, output}");
    t.examples.push_back(
        Example{database_from_json(e["input"], where + "/input"), collection_from_json(e["output"], where + "/output")});
  }
  if (t.examples.empty()) throw InputError("/examples", "at least one example is required");

  if (j.contains("schema")) {
    t.schema = schema_from_json(j["schema"], "/schema");
  } else {
    try {
      t.schema = compute_schema(t.examples.front().input);
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError("/examples/0/input", e.what());
    }
  }
  return t;
}

Json task_to_json(const SynthesisTask& t) {
  Json j = Json::object();
  j["collection"] = t.collection;
  j["constants"] = Json::array();
  for (const auto& c : t.constants) j["constants"].push_back(value_to_json(c));
  j["schema"] = schema_to_json(t.schema);
  j["examples"] = Json::array();
  for (const auto& ex : t.examples) {
    Json in = Json::object();
    for (const auto& [name, c] : ex.input) in[name] = collection_to_json(c);
    j["examples"].push_back(Json{{"input", in}, {"output", collection_to_json(ex.output)}});
  }
  return j;
}

SynthesisTask load_task(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), "cannot open task file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string(), e.what());
  }
  return task_from_json(j);
}

}  // namespace docsynth
