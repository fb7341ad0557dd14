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

#include <compare>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace docsynth {

class Value;

struct Null {
  friend bool operator==(Null, Null) { return true; }
};

/// ISO-8601 instant, kept in its canonical string form.
struct Datetime {
  std::string iso;
  friend auto operator<=>(const Datetime&, const Datetime&) = default;
};

/// 24-hex-character object identifier.
struct ObjectId {
  std::string hex;
  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};

using Array = std::vector<Value>;

/// Ordered attribute -> value map. Equality ignores attribute order.
class Document {
 public:
  using Field = std::pair<std::string, Value>;

  Document() = default;
  Document(std::initializer_list<Field> fields);

  const Value* find(std::string_view name) const;
  Value* find(std::string_view name);
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  /// Replaces an existing attribute in place or appends a new one.
  void set(std::string name, Value value);
  /// Appends only when absent; returns false if the attribute already exists.
  bool insert(std::string name, Value value);
  bool erase(std::string_view name);

  std::size_t size() const { return fields_.size(); }
  bool empty() const { return fields_.empty(); }
  const std::vector<Field>& fields() const { return fields_; }
  auto begin() const { return fields_.begin(); }
  auto end() const { return fields_.end(); }

  friend bool operator==(const Document& a, const Document& b);

 private:
  std::vector<Field> fields_;
};

class Value {
 public:
  enum class Kind { Null, Num, Str, Bool, Datetime, ObjectId, Array, Doc };

  Value() : data_(Null{}) {}
  Value(Null) : data_(Null{}) {}
  Value(double d) : data_(d) {}
  template <std::integral I>
    requires(!std::same_as<I, bool>)
  Value(I i) : data_(static_cast<double>(i)) {}
  Value(bool b) : data_(b) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(Datetime d) : data_(std::move(d)) {}
  Value(ObjectId o) : data_(std::move(o)) {}
  Value(Array a) : data_(std::move(a)) {}
  Value(Document d) : data_(std::move(d)) {}

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_null() const { return kind() == Kind::Null; }
  bool is_num() const { return kind() == Kind::Num; }
  bool is_str() const { return kind() == Kind::Str; }
  bool is_bool() const { return kind() == Kind::Bool; }
  bool is_array() const { return kind() == Kind::Array; }
  bool is_doc() const { return kind() == Kind::Doc; }
  bool is_primitive() const { return !is_array() && !is_doc() && !is_null(); }

  double as_num() const { return std::get<double>(data_); }
  const std::string& as_str() const { return std::get<std::string>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const Datetime& as_datetime() const { return std::get<Datetime>(data_); }
  const ObjectId& as_object_id() const { return std::get<ObjectId>(data_); }
  const Array& as_array() const { return std::get<Array>(data_); }
  Array& as_array() { return std::get<Array>(data_); }
  const Document& as_doc() const { return std::get<Document>(data_); }
  Document& as_doc() { return std::get<Document>(data_); }

  friend bool operator==(const Value& a, const Value& b);

 private:
  std::variant<Null, double, std::string, bool, Datetime, ObjectId, Array, Document> data_;
};

using Collection = std::vector<Document>;
using Database = std::map<std::string, Collection, std::less<>>;

/// Ordering used by comparison predicates: defined only between two values of
/// the same primitive kind (numbers, strings, booleans, datetimes, object ids).
std::optional<std::strong_ordering> compare_primitive(const Value& a, const Value& b);

/// Total order over all values (kind rank first), used by Min/Max aggregation.
std::weak_ordering total_order(const Value& a, const Value& b);

/// Human-readable rendering: `{a: 1, b: [2, 3], c: "x"}`.
std::string to_display(const Value& v);
std::string to_display(const Document& d);
std::string to_display(const Collection& c);
std::string format_number(double d);

/// Rendering with document attributes sorted, so equal values render equally.
std::string canonical_string(const Value& v);
std::string canonical_string(const Document& d);

/// Multiset equality of collections (document order ignored).
bool same_collection(const Collection& a, const Collection& b);

// ---------------------------------------------------------------------------

inline Document::Document(std::initializer_list<Field> fields) {
  for (const auto& f : fields) set(f.first, f.second);
}

}  // namespace docsynth
