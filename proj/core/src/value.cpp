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

#include "docsynth/value.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

namespace docsynth {

const Value* Document::find(std::string_view name) const {
  for (const auto& [k, v] : fields_)
    if (k == name) return &v;
  return nullptr;
}

Value* Document::find(std::string_view name) {
  for (auto& [k, v] : fields_)
    if (k == name) return &v;
  return nullptr;
}

void Document::set(std::string name, Value value) {
  if (Value* slot = find(name)) {
    *slot = std::move(value);
    return;
  }
  fields_.emplace_back(std::move(name), std::move(value));
}

bool Document::insert(std::string name, Value value) {
  if (find(name)) return false;
  fields_.emplace_back(std::move(name), std::move(value));
  return true;
}

bool Document::erase(std::string_view name) {
  auto it = std::find_if(fields_.begin(), fields_.end(),
                         [&](const Field& f) { return f.first == name; });
  if (it == fields_.end()) return false;
  fields_.erase(it);
  return true;
}

bool operator==(const Document& a, const Document& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a.fields_) {
    const Value* other = b.find(k);
    if (!other || !(*other == v)) return false;
  }
  return true;
}

bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }

std::optional<std::strong_ordering> compare_primitive(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return std::nullopt;
  switch (a.kind()) {
    case Value::Kind::Num: {
      double x = a.as_num(), y = b.as_num();
      if (x < y) return std::strong_ordering::less;
      if (x > y) return std::strong_ordering::greater;
      if (x == y) return std::strong_ordering::equal;
      return std::nullopt;  // NaN
    }
    case Value::Kind::Str:
      return a.as_str() <=> b.as_str();
    case Value::Kind::Bool:
      return a.as_bool() <=> b.as_bool();
    case Value::Kind::Datetime:
      return a.as_datetime().iso <=> b.as_datetime().iso;
    case Value::Kind::ObjectId:
      return a.as_object_id().hex <=> b.as_object_id().hex;
    default:
      return std::nullopt;
  }
}

namespace {

// BSON-like kind ranking for the total order.
int kind_rank(Value::Kind k) {
  switch (k) {
    case Value::Kind::Null: return 0;
    case Value::Kind::Num: return 1;
    case Value::Kind::Str: return 2;
    case Value::Kind::Doc: return 3;
    case Value::Kind::Array: return 4;
    case Value::Kind::ObjectId: return 5;
    case Value::Kind::Bool: return 6;
    case Value::Kind::Datetime: return 7;
  }
  return 8;
}

}  // namespace

std::weak_ordering total_order(const Value& a, const Value& b) {
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra <=> rb;
  if (auto c = compare_primitive(a, b)) return *c;
  if (a.is_null()) return std::weak_ordering::equivalent;
  // Composite values: fall back to their canonical rendering.
  return canonical_string(a) <=> canonical_string(b);
}

std::string format_number(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  if (d == std::floor(d) && std::fabs(d) < 1e15) {
    long long i = static_cast<long long>(d);
    if (i == 0) return "0";
    return std::to_string(i);
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void render(const Value& v, bool sorted, std::string& out);

void render_doc(const Document& d, bool sorted, std::string& out) {
  std::vector<const Document::Field*> fields;
  for (const auto& f : d) fields.push_back(&f);
  if (sorted)
    std::sort(fields.begin(), fields.end(),
              [](auto* a, auto* b) { return a->first < b->first; });
  out += '{';
  bool first = true;
  for (auto* f : fields) {
    if (!first) out += ", ";
    first = false;
    out += f->first;
    out += ": ";
    render(f->second, sorted, out);
  }
  out += '}';
}

void render(const Value& v, bool sorted, std::string& out) {
  switch (v.kind()) {
    case Value::Kind::Null: out += "null"; break;
    case Value::Kind::Num: out += format_number(v.as_num()); break;
    case Value::Kind::Str: out += quote(v.as_str()); break;
    case Value::Kind::Bool: out += v.as_bool() ? "true" : "false"; break;
    case Value::Kind::Datetime: out += "Date(" + quote(v.as_datetime().iso) + ")"; break;
    case Value::Kind::ObjectId: out += "ObjectId(" + quote(v.as_object_id().hex) + ")"; break;
    case Value::Kind::Array: {
      out += '[';
      bool first = true;
      for (const auto& e : v.as_array()) {
        if (!first) out += ", ";
        first = false;
        render(e, sorted, out);
      }
      out += ']';
      break;
    }
    case Value::Kind::Doc: render_doc(v.as_doc(), sorted, out); break;
  }
}

}  // namespace

std::string to_display(const Value& v) {
  std::string out;
  render(v, false, out);
  return out;
}

std::string to_display(const Document& d) {
  std::string out;
  render_doc(d, false, out);
  return out;
}

std::string to_display(const Collection& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    render_doc(c[i], false, out);
  }
  return out + "]";
}

std::string canonical_string(const Value& v) {
  std::string out;
  render(v, true, out);
  return out;
}

std::string canonical_string(const Document& d) {
  std::string out;
  render_doc(d, true, out);
  return out;
}

bool same_collection(const Collection& a, const Collection& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<std::string, long> counts;
  for (const auto& d : a) ++counts[canonical_string(d)];
  for (const auto& d : b) {
    auto it = counts.find(canonical_string(d));
    if (it == counts.end() || it->second == 0) return false;
    --it->second;
  }
  return true;
}

}  // namespace docsynth
