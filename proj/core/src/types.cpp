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

#include "docsynth/types.hpp"

#include "docsynth/error.hpp"

namespace docsynth {

ValueType ValueType::array(ValueType elem) {
  ValueType t(Kind::Array);
  t.elem_ = std::make_shared<const ValueType>(std::move(elem));
  return t;
}

ValueType ValueType::doc(DocumentType fields) {
  ValueType t(Kind::Doc);
  t.doc_ = std::make_shared<const DocumentType>(std::move(fields));
  return t;
}

bool operator==(const ValueType& a, const ValueType& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == ValueType::Kind::Array) return *a.elem_ == *b.elem_;
  if (a.kind_ == ValueType::Kind::Doc) return *a.doc_ == *b.doc_;
  return true;
}

std::string ValueType::text() const {
  switch (kind_) {
    case Kind::Num: return "Num";
    case Kind::Str: return "String";
    case Kind::Bool: return "Bool";
    case Kind::Datetime: return "Datetime";
    case Kind::ObjectId: return "ObjectId";
    case Kind::Array: return "Arr<" + elem_->text() + ">";
    case Kind::Doc: return doc_->text();
  }
  return "?";
}

const ValueType* DocumentType::find(std::string_view name) const {
  auto it = fields_.find(name);
  return it == fields_.end() ? nullptr : &it->second;
}

std::string DocumentType::text() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, t] : fields_) {
    if (!first) out += ", ";
    first = false;
    out += k + ": " + t.text();
  }
  return out + "}";
}

Schema::Schema(Map entries) : entries_(std::move(entries)) {
  for (const auto& [name, t] : entries_)
    if (!t.is_array() || !t.elem().is_doc())
      throw Error("schema entry '" + name + "' is not an array of documents");
}

const ValueType* Schema::find(std::string_view coll) const {
  auto it = entries_.find(coll);
  return it == entries_.end() ? nullptr : &it->second;
}

const DocumentType& Schema::doc_type(std::string_view coll) const {
  const ValueType* t = find(coll);
  if (!t) throw UnknownCollection(std::string(coll));
  return t->elem().fields();
}

std::string Schema::text() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, t] : entries_) {
    if (!first) out += ", ";
    first = false;
    out += k + ": " + t.text();
  }
  return out + "}";
}

namespace {

// Partial type: may still be unknown (null, empty array) or poisoned by a
// conflict in lenient mode.
struct PT {
  enum class K { Unknown, Bad, Prim, Array, Doc } k = K::Unknown;
  ValueType::Kind prim = ValueType::Kind::Num;
  std::shared_ptr<PT> elem;
  std::map<std::string, PT, std::less<>> fields;
};

std::string pt_str(const PT& p) {
  switch (p.k) {
    case PT::K::Unknown: return "unknown";
    case PT::K::Bad: return "conflict";
    case PT::K::Prim: {
      ValueType t = ValueType::num();
      switch (p.prim) {
        case ValueType::Kind::Str: t = ValueType::str(); break;
        case ValueType::Kind::Bool: t = ValueType::boolean(); break;
        case ValueType::Kind::Datetime: t = ValueType::datetime(); break;
        case ValueType::Kind::ObjectId: t = ValueType::object_id(); break;
        default: break;
      }
      return t.text();
    }
    case PT::K::Array: return "Arr<" + pt_str(*p.elem) + ">";
    case PT::K::Doc: return "{...}";
  }
  return "?";
}

struct Inferer {
  const InferOptions& opts;

  PT unify(PT a, const PT& b) const {
    if (a.k == PT::K::Unknown) return b;
    if (b.k == PT::K::Unknown) return a;
    if (a.k == PT::K::Bad || b.k == PT::K::Bad) return bad();
    if (a.k != b.k || (a.k == PT::K::Prim && a.prim != b.prim)) {
      if (opts.lenient) return bad();
      throw HeterogeneousArray("conflicting types " + pt_str(a) + " and " + pt_str(b));
    }
    if (a.k == PT::K::Array) {
      a.elem = std::make_shared<PT>(unify(*a.elem, *b.elem));
    } else if (a.k == PT::K::Doc) {
      for (const auto& [name, t] : b.fields) {
        auto it = a.fields.find(name);
        if (it == a.fields.end())
          a.fields.emplace(name, t);
        else
          it->second = unify(it->second, t);
      }
    }
    return a;
  }

  static PT bad() {
    PT p;
    p.k = PT::K::Bad;
    return p;
  }

  PT infer(const Value& v) const {
    PT p;
    switch (v.kind()) {
      case Value::Kind::Null: return p;
      case Value::Kind::Num: p.k = PT::K::Prim; p.prim = ValueType::Kind::Num; return p;
      case Value::Kind::Str: p.k = PT::K::Prim; p.prim = ValueType::Kind::Str; return p;
      case Value::Kind::Bool: p.k = PT::K::Prim; p.prim = ValueType::Kind::Bool; return p;
      case Value::Kind::Datetime: p.k = PT::K::Prim; p.prim = ValueType::Kind::Datetime; return p;
      case Value::Kind::ObjectId: p.k = PT::K::Prim; p.prim = ValueType::Kind::ObjectId; return p;
      case Value::Kind::Array: {
        PT e;
        for (const auto& x : v.as_array()) e = unify(std::move(e), infer(x));
        p.k = PT::K::Array;
        p.elem = std::make_shared<PT>(std::move(e));
        return p;
      }
      case Value::Kind::Doc:
        p.k = PT::K::Doc;
        for (const auto& [name, x] : v.as_doc()) p.fields.emplace(name, infer(x));
        return p;
    }
    return p;
  }

  // nullopt means "no type": the caller drops the attribute.
  std::optional<ValueType> finish(const PT& p) const {
    switch (p.k) {
      case PT::K::Unknown:
      case PT::K::Bad:
        return std::nullopt;
      case PT::K::Prim: {
        switch (p.prim) {
          case ValueType::Kind::Num: return ValueType::num();
          case ValueType::Kind::Str: return ValueType::str();
          case ValueType::Kind::Bool: return ValueType::boolean();
          case ValueType::Kind::Datetime: return ValueType::datetime();
          case ValueType::Kind::ObjectId: return ValueType::object_id();
          default: return std::nullopt;
        }
      }
      case PT::K::Array: {
        if (p.elem->k == PT::K::Unknown) {
          if (opts.fallback_elem) return ValueType::array(*opts.fallback_elem);
          if (opts.lenient) return std::nullopt;
          throw UntypableArray("array has no non-null element to type it");
        }
        auto e = finish(*p.elem);
        if (!e) return std::nullopt;
        return ValueType::array(*e);
      }
      case PT::K::Doc: return ValueType::doc(finish_doc(p));
    }
    return std::nullopt;
  }

  DocumentType finish_doc(const PT& p) const {
    DocumentType d;
    for (const auto& [name, t] : p.fields)
      if (auto ft = finish(t)) d.set(name, *ft);
    return d;
  }
};

PT collection_pt(const Inferer& inf, const Collection& c) {
  PT acc;
  acc.k = PT::K::Doc;
  for (std::size_t i = 0; i < c.size(); ++i) {
    try {
      acc = inf.unify(std::move(acc), inf.infer(Value(c[i])));
    } catch (const HeterogeneousArray& e) {
      throw HeterogeneousArray("document " + std::to_string(i) + ": " + e.what());
    }
  }
  return acc;
}

}  // namespace

ValueType infer_value_type(const Value& v, const InferOptions& opts) {
  Inferer inf{opts};
  PT p = inf.infer(v);
  if (p.k == PT::K::Unknown) throw UntypableArray("null has no type of its own");
  auto t = inf.finish(p);
  if (!t) throw HeterogeneousArray("value has conflicting element types");
  return *t;
}

DocumentType infer_collection_type(const Collection& c, const InferOptions& opts) {
  Inferer inf{opts};
  PT p = collection_pt(inf, c);
  return inf.finish_doc(p);
}

Schema compute_schema(const Database& db, const InferOptions& opts) {
  Schema::Map entries;
  for (const auto& [name, coll] : db) {
    try {
      entries.emplace(name, ValueType::array(ValueType::doc(infer_collection_type(coll, opts))));
    } catch (const HeterogeneousArray& e) {
      throw HeterogeneousArray("collection " + name + ", " + e.what());
    } catch (const UntypableArray& e) {
      throw UntypableArray("collection " + name + ": " + e.what());
    }
  }
  return Schema(std::move(entries));
}

bool conforms(const Database& db, const Schema& s) {
  try {
    return compute_schema(db) == s;
  } catch (const Error&) {
    return false;
  }
}

namespace {

bool value_fits(const Value& v, const ValueType& t, std::string& why, const std::string& at);

bool doc_fits(const Document& d, const DocumentType& t, std::string& why, const std::string& at) {
  for (const auto& [name, v] : d) {
    const ValueType* ft = t.find(name);
    std::string here = at.empty() ? name : at + "." + name;
    if (!ft) {
      if (v.is_null()) continue;
      why = "attribute '" + here + "' is not in the schema";
      return false;
    }
    if (!value_fits(v, *ft, why, here)) return false;
  }
  return true;
}

bool value_fits(const Value& v, const ValueType& t, std::string& why, const std::string& at) {
  if (v.is_null()) return true;
  bool ok = false;
  switch (t.kind()) {
    case ValueType::Kind::Num: ok = v.is_num(); break;
    case ValueType::Kind::Str: ok = v.is_str(); break;
    case ValueType::Kind::Bool: ok = v.is_bool(); break;
    case ValueType::Kind::Datetime: ok = v.kind() == Value::Kind::Datetime; break;
    case ValueType::Kind::ObjectId: ok = v.kind() == Value::Kind::ObjectId; break;
    case ValueType::Kind::Array:
      if (!v.is_array()) break;
      for (const auto& e : v.as_array())
        if (!value_fits(e, t.elem(), why, at + "[]")) return false;
      return true;
    case ValueType::Kind::Doc:
      if (!v.is_doc()) break;
      return doc_fits(v.as_doc(), t.fields(), why, at);
  }
  if (!ok) why = "value " + to_display(v) + " at '" + at + "' does not have type " + t.text();
  return ok;
}

}  // namespace

bool fits(const Database& db, const Schema& s, std::string* why) {
  std::string msg;
  bool ok = true;
  for (const auto& [name, coll] : db) {
    const ValueType* t = s.find(name);
    if (!t) {
      msg = "collection '" + name + "' is not in the schema";
      ok = false;
      break;
    }
    for (std::size_t i = 0; ok && i < coll.size(); ++i) {
      if (!doc_fits(coll[i], t->elem().fields(), msg, "")) {
        msg = "collection " + name + ", document " + std::to_string(i) + ": " + msg;
        ok = false;
      }
    }
    if (!ok) break;
  }
  if (ok)
    for (const auto& [name, t] : s.map())
      if (!db.count(name)) {
        msg = "collection '" + name + "' is missing";
        ok = false;
        break;
      }
  if (!ok && why) *why = msg;
  return ok;
}

}  // namespace docsynth
