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

// Hand-rolled random generators for property tests. Values are drawn from
// small pools so that duplicates (and hence non-trivial groups and joins)
// are common.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <docsynth/access_path.hpp>
#include <docsynth/types.hpp>
#include <docsynth/value.hpp>

namespace gen {

using namespace docsynth;

inline std::vector<AccessPath> all_paths(const DocumentType& t, const AccessPath* prefix = nullptr) {
  std::vector<AccessPath> out;
  for (const auto& [name, ft] : t) {
    AccessPath h = prefix ? prefix->child(name) : AccessPath({name});
    out.push_back(h);
    if (ft.is_doc()) {
      auto sub = all_paths(ft.fields(), &h);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  }
  return out;
}

struct DataOptions {
  bool nulls = false;         // may emit null attribute values
  bool empty_arrays = false;  // may emit empty arrays
  bool missing = false;       // may omit attributes
  int max_array = 3;
};

class DataGen {
 public:
  explicit DataGen(std::mt19937& rng, DataOptions opts = {}) : rng_(rng), opts_(opts) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(uniform(0, static_cast<int>(xs.size()) - 1))];
  }

  /// Arbitrary (possibly ill-typed) value.
  Value value(int depth) {
    int k = uniform(0, depth > 0 ? 6 : 3);
    switch (k) {
      case 0: return Value(uniform(-3, 5));
      case 1: return Value(pick(strings()));
      case 2: return Value(coin());
      case 3: return coin(0.2) ? Value() : Value(uniform(0, 3) + 0.5);
      case 4: {
        Array a;
        int n = uniform(0, 3);
        bool mixed = coin(0.2);
        int kind = uniform(0, 1);
        for (int i = 0; i < n; ++i) a.push_back(mixed ? value(depth - 1) : (kind ? Value(uniform(0, 4)) : Value(pick(strings()))));
        return Value(std::move(a));
      }
      default: {
        Document d;
        int n = uniform(0, 3);
        for (int i = 0; i < n; ++i) d.set(pick(names()), value(depth - 1));
        return Value(std::move(d));
      }
    }
  }

  ValueType primitive_type() {
    switch (uniform(0, 3)) {
      case 0:
      case 1: return ValueType::num();
      case 2: return ValueType::str();
      default: return ValueType::boolean();
    }
  }

  ValueType random_type(int depth) {
    int k = depth > 0 ? uniform(0, 9) : 0;
    if (k <= 6) return primitive_type();
    if (k == 7) return ValueType::array(ValueType::num());
    if (k == 8) return ValueType::array(ValueType::doc(random_doc_type(uniform(1, 2), depth - 1)));
    return ValueType::doc(random_doc_type(uniform(1, 2), depth - 1));
  }

  DocumentType random_doc_type(int nattrs, int depth) {
    DocumentType t;
    std::vector<std::string> pool = names();
    std::shuffle(pool.begin(), pool.end(), rng_);
    for (int i = 0; i < nattrs && i < static_cast<int>(pool.size()); ++i) t.set(pool[static_cast<std::size_t>(i)], random_type(depth));
    return t;
  }

  Schema random_schema(int max_colls = 2, int max_attrs = 4) {
    Schema::Map m;
    int n = uniform(1, max_colls);
    for (int i = 0; i < n; ++i)
      m.emplace("c" + std::to_string(i), ValueType::array(ValueType::doc(random_doc_type(uniform(1, max_attrs), 2))));
    return Schema(std::move(m));
  }

  Value value_of(const ValueType& t) {
    if (opts_.nulls && coin(0.1)) return Value();
    switch (t.kind()) {
      case ValueType::Kind::Num: return Value(uniform(0, 4));
      case ValueType::Kind::Str: return Value(pick(strings()));
      case ValueType::Kind::Bool: return Value(coin());
      case ValueType::Kind::Datetime: return Value(Datetime{"2024-01-0" + std::to_string(uniform(1, 9)) + "T00:00:00Z"});
      case ValueType::Kind::ObjectId: return Value(ObjectId{std::string(23, '0') + std::to_string(uniform(0, 9))});
      case ValueType::Kind::Array: {
        Array a;
        int n = uniform(opts_.empty_arrays ? 0 : 1, opts_.max_array);
        for (int i = 0; i < n; ++i) a.push_back(value_of(t.elem()));
        return Value(std::move(a));
      }
      case ValueType::Kind::Doc: return Value(doc_of(t.fields()));
    }
    return Value();
  }

  Document doc_of(const DocumentType& t) {
    Document d;
    for (const auto& [name, ft] : t) {
      if (opts_.missing && coin(0.1)) continue;
      d.set(name, value_of(ft));
    }
    return d;
  }

  Collection collection(const DocumentType& t, int n) {
    Collection c;
    for (int i = 0; i < n; ++i) c.push_back(doc_of(t));
    return c;
  }

  Database database(const Schema& s, int max_docs, int min_docs = 1) {
    Database db;
    for (const auto& [name, t] : s.map()) db.emplace(name, collection(t.elem().fields(), uniform(min_docs, max_docs)));
    return db;
  }

  static const std::vector<std::string>& strings() {
    static const std::vector<std::string> s{"a", "b", "c"};
    return s;
  }
  static const std::vector<std::string>& names() {
    static const std::vector<std::string> s{"p", "q", "r", "s", "t"};
    return s;
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937& rng_;
  DataOptions opts_;
};

}  // namespace gen
