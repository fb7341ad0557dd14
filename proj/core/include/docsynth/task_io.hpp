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

#include "docsynth/json_io.hpp"
#include "docsynth/synthesizer.hpp"

namespace docsynth {

/// Task file: `{collection, constants?, schema?, examples: [{input, output}]}`.
/// Without a schema the first example's input decides it. Errors are
/// InputError with the JSON path of the fault.
SynthesisTask task_from_json(const Json& j);
Json task_to_json(const SynthesisTask& t);

SynthesisTask load_task(const std::filesystem::path& path);

}  // namespace docsynth
