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

// Shared worked-example data for the test suites.

#include <docsynth/query.hpp>
#include <docsynth/value.hpp>

namespace fixtures {

using namespace docsynth;

inline Array depths(std::initializer_list<int> ds) {
  Array a;
  for (int d : ds) a.push_back(Document{{"depth", d}});
  return a;
}

/// Three forum posts with nested replies.
inline Collection posts() {
  return {
      Document{{"_id", "1"}, {"title", "Title-1"}, {"replies", depths({0, 0, 1})}},
      Document{{"_id", "2"}, {"title", "Title-2"}, {"replies", depths({0, 1, 2})}},
      Document{{"_id", "3"}, {"title", "Title-3"}, {"replies", depths({0, 1, 2, 3})}},
  };
}

inline Database posts_db() { return Database{{"posts", posts()}}; }

inline Collection posts_output() {
  return {
      Document{{"reply_count", 3}, {"title", "Title-3"}},
      Document{{"reply_count", 2}, {"title", "Title-2"}},
  };
}

inline const char* kPostsQuery =
    "Project(Match(AddFields(Group(Match(Unwind(posts, replies), replies.depth > 0), "
    "[_id, title], [reply_count], [Count()]), [title], [_id.title]), reply_count > 1), "
    "[reply_count, title])";

}  // namespace fixtures
