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
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "docsynth/access_path.hpp"
#include "docsynth/size_formula.hpp"
#include "docsynth/types.hpp"
#include "docsynth/value.hpp"

namespace docsynth {

/// Stand-in for one (`One`) or one-or-more (`Plus`) unknown top-level attributes.
struct Placeholder {
  enum class Arity { One, Plus };
  Arity arity = Arity::Plus;
  int label = 0;
  friend bool operator==(const Placeholder&, const Placeholder&) = default;
};

using AttrKey = std::variant<std::string, Placeholder>;

std::string key_text(const AttrKey& k);

/// Either a concrete value type or "any type".
class Slot {
 public:
  static Slot any() { return Slot(); }
  static Slot of(ValueType t) { return Slot(std::move(t)); }

  bool is_any() const { return !type_; }
  const ValueType& type() const { return *type_; }
  std::string text() const { return type_ ? type_->text() : "Any"; }

  friend bool operator==(const Slot&, const Slot&) = default;

 private:
  Slot() = default;
  explicit Slot(ValueType t) : type_(std::move(t)) {}
  std::optional<ValueType> type_;
};

/// Document type whose top level may contain placeholders and Any-typed
/// attributes. Nested documents are ordinary ValueType::doc values.
class AugmentedType {
 public:
  using Entry = std::pair<AttrKey, Slot>;

  AugmentedType() = default;
  AugmentedType(std::initializer_list<Entry> entries);
  static AugmentedType from(const DocumentType& t);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Slot* find(const AttrKey& k) const;
  /// Replaces in place or appends.
  void set(const AttrKey& k, Slot s);
  bool erase(const AttrKey& k);
  bool has_placeholders() const;

  /// `{title: Str, ?⁺3: Num}`
  std::string text() const;
  /// Same string for types equal up to entry order and placeholder relabeling.
  std::string canonical() const;

  /// Order-insensitive, label-sensitive.
  friend bool operator==(const AugmentedType& a, const AugmentedType& b);

 private:
  std::vector<Entry> entries_;
};

/// Equal up to entry order and a bijective relabeling of placeholders.
bool equivalent(const AugmentedType& a, const AugmentedType& b);

AugmentedType type_union(const AugmentedType& a, const AugmentedType& b);
AugmentedType type_intersect(const AugmentedType& a, const AugmentedType& b);
bool type_subset(const AugmentedType& a, const AugmentedType& b);
/// Throws NotASubset unless b ⊆ a.
AugmentedType type_subtract(const AugmentedType& a, const AugmentedType& b);
/// Top-level key, or a named attribute somewhere inside nested documents.
bool type_member(const AttrKey& attr, const AugmentedType& t);
/// Replaces the attribute's type: top level first, else the leftmost nested
/// document containing it. Unchanged if absent.
AugmentedType type_replace(const AugmentedType& t, const AttrKey& attr, const Slot& s);
/// Replaces the type at an exact access path (documents only along the way).
AugmentedType type_replace_at(const AugmentedType& t, const AccessPath& h, const ValueType& v);

/// Drops placeholders and Any-typed attributes.
DocumentType to_doc_type(const AugmentedType& t);

bool matches(const DocumentType& t, const AugmentedType& aug);

struct AbstractCollection {
  AugmentedType type;
  SizeFormula formula;
  int result_var = 0;

  /// `({...}, l0 = 3 ∧ ...)`
  std::string text() const;
};

using AbstractDatabase = std::map<std::string, AbstractCollection, std::less<>>;

/// An empty collection is checked on size alone.
bool concretizes(const Collection& c, const AbstractCollection& ac, const SizeSolver& solver = default_solver());
/// Same, with the collection summarized by its size and (if non-empty) type.
bool concretizes(std::size_t size, const std::optional<DocumentType>& type, const AbstractCollection& ac,
                 const SizeSolver& solver = default_solver());

AbstractDatabase abstract_db_of(const Database& input, const Schema& s);

}  // namespace docsynth
