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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "docsynth/value.hpp"

namespace docsynth {

class DocumentType;

/// Type of a non-null value.
class ValueType {
 public:
  enum class Kind { Num, Str, Bool, Datetime, ObjectId, Array, Doc };

  static ValueType num() { return ValueType(Kind::Num); }
  static ValueType str() { return ValueType(Kind::Str); }
  static ValueType boolean() { return ValueType(Kind::Bool); }
  static ValueType datetime() { return ValueType(Kind::Datetime); }
  static ValueType object_id() { return ValueType(Kind::ObjectId); }
  static ValueType array(ValueType elem);
  static ValueType doc(DocumentType fields);

  Kind kind() const { return kind_; }
  bool is_array() const { return kind_ == Kind::Array; }
  bool is_doc() const { return kind_ == Kind::Doc; }
  bool is_primitive() const { return !is_array() && !is_doc(); }
  const ValueType& elem() const { return *elem_; }
  const DocumentType& fields() const { return *doc_; }

  /// `Num`, `Arr<{depth: Num}>`, ...
  std::string text() const;

  friend bool operator==(const ValueType& a, const ValueType& b);
  friend bool operator<(const ValueType& a, const ValueType& b) { return a.text() < b.text(); }

 private:
  explicit ValueType(Kind k) : kind_(k) {}
  Kind kind_;
  std::shared_ptr<const ValueType> elem_;
  std::shared_ptr<const DocumentType> doc_;
};

/// Attribute -> type. Kept sorted by name, so equality ignores order.
class DocumentType {
 public:
  using Map = std::map<std::string, ValueType, std::less<>>;

  DocumentType() = default;
  DocumentType(std::initializer_list<Map::value_type> fields) : fields_(fields) {}
  explicit DocumentType(Map fields) : fields_(std::move(fields)) {}

  const ValueType* find(std::string_view name) const;
  void set(const std::string& name, ValueType t) { fields_.insert_or_assign(name, std::move(t)); }
  bool erase(const std::string& name) { return fields_.erase(name) > 0; }
  std::size_t size() const { return fields_.size(); }
  bool empty() const { return fields_.empty(); }
  const Map& map() const { return fields_; }
  auto begin() const { return fields_.begin(); }
  auto end() const { return fields_.end(); }

  std::string text() const;

  friend bool operator==(const DocumentType& a, const DocumentType& b) { return a.fields_ == b.fields_; }

 private:
  Map fields_;
};

/// Collection name -> Arr<{...}>.
class Schema {
 public:
  using Map = std::map<std::string, ValueType, std::less<>>;

  Schema() = default;
  /// Throws Error unless every entry is an array of documents.
  explicit Schema(Map entries);

  const ValueType* find(std::string_view coll) const;
  /// Element document type of the collection; throws UnknownCollection.
  const DocumentType& doc_type(std::string_view coll) const;
  const Map& map() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::string text() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  Map entries_;
};

struct InferOptions {
  /// Element type assumed for empty / all-null arrays.
  std::optional<ValueType> fallback_elem;
  /// Drop attributes that are untypable or conflicting instead of throwing.
  bool lenient = false;
};

/// Throws HeterogeneousArray / UntypableArray.
ValueType infer_value_type(const Value& v, const InferOptions& opts = {});
/// Common document type of a collection (attribute-wise union).
DocumentType infer_collection_type(const Collection& c, const InferOptions& opts = {});

Schema compute_schema(const Database& db, const InferOptions& opts = {});
bool conforms(const Database& db, const Schema& s);

/// Weaker check used for task validation: every document of every collection
/// types into the schema (attributes may be missing or null).
bool fits(const Database& db, const Schema& s, std::string* why = nullptr);

}  // namespace docsynth
