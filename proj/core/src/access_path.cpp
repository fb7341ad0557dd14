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

#include "docsynth/access_path.hpp"

#include "docsynth/error.hpp"

namespace docsynth {

AccessPath::AccessPath(std::vector<std::string> segments) : segs_(std::move(segments)) {
  if (segs_.empty()) throw Error("access path must not be empty");
  for (const auto& s : segs_)
    if (s.empty() || s.find('.') != std::string::npos)
      throw Error("invalid access path segment '" + s + "'");
}

AccessPath AccessPath::parse(std::string_view dotted) {
  std::vector<std::string> segs;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    segs.emplace_back(dotted.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return AccessPath(std::move(segs));
}

AccessPath AccessPath::child(std::string name) const {
  auto segs = segs_;
  segs.push_back(std::move(name));
  return AccessPath(std::move(segs));
}

AccessPath AccessPath::tail() const {
  return AccessPath(std::vector<std::string>(segs_.begin() + 1, segs_.end()));
}

bool AccessPath::starts_with(const AccessPath& prefix) const {
  if (prefix.segs_.size() > segs_.size()) return false;
  for (std::size_t i = 0; i < prefix.segs_.size(); ++i)
    if (segs_[i] != prefix.segs_[i]) return false;
  return true;
}

std::string AccessPath::str() const {
  std::string out;
  for (std::size_t i = 0; i < segs_.size(); ++i) {
    if (i) out += '.';
    out += segs_[i];
  }
  return out;
}

const Value* get_path(const Document& d, const AccessPath& h) {
  const Document* cur = &d;
  const Value* v = nullptr;
  for (std::size_t i = 0; i < h.length(); ++i) {
    v = cur->find(h.segments()[i]);
    if (!v) return nullptr;
    if (i + 1 < h.length()) {
      if (!v->is_doc()) return nullptr;
      cur = &v->as_doc();
    }
  }
  return v;
}

bool has_path(const Document& d, const AccessPath& h) { return get_path(d, h) != nullptr; }

}  // namespace docsynth
