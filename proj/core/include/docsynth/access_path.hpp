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
#include <string_view>
#include <vector>

#include "docsynth/value.hpp"

namespace docsynth {

/// Dot-separated attribute path, e.g. `info.score`.
class AccessPath {
 public:
  AccessPath() = default;
  explicit AccessPath(std::vector<std::string> segments);
  /// Splits on '.'; throws Error on empty segments.
  static AccessPath parse(std::string_view dotted);

  const std::vector<std::string>& segments() const { return segs_; }
  std::size_t length() const { return segs_.size(); }
  const std::string& head() const { return segs_.front(); }
  const std::string& last() const { return segs_.back(); }
  bool empty() const { return segs_.empty(); }

  AccessPath child(std::string name) const;
  /// Drops the first segment.
  AccessPath tail() const;
  bool starts_with(const AccessPath& prefix) const;
  std::string str() const;

  friend auto operator<=>(const AccessPath&, const AccessPath&) = default;
  friend bool operator==(const AccessPath&, const AccessPath&) = default;

 private:
  std::vector<std::string> segs_;
};

/// Value at the path, or nullptr when any segment is missing or the walk
/// crosses a non-document.
const Value* get_path(const Document& d, const AccessPath& h);
bool has_path(const Document& d, const AccessPath& h);

}  // namespace docsynth
