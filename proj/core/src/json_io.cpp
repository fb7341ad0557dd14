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

#include "docsynth/json_io.hpp"

#include <cctype>

#include "docsynth/error.hpp"

namespace docsynth {

namespace {

bool is_hex24(const std::string& s) {
  if (s.size() != 24) return false;
  for (char c : s)
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }

}  // namespace

Value value_from_json(const Json& j, const std::string& where) {
  switch (j.type()) {
    case Json::value_t::null: return Value();
    case Json::value_t::boolean: return Value(j.get<bool>());
    case Json::value_t::number_integer: return Value(static_cast<double>(j.get<std::int64_t>()));
    case Json::value_t::number_unsigned: return Value(static_cast<double>(j.get<std::uint64_t>()));
    case Json::value_t::number_float: return Value(j.get<double>());
    case Json::value_t::string: return Value(j.get<std::string>());
    case Json::value_t::array: {
      Array a;
      std::size_t i = 0;
      for (const auto& e : j) a.push_back(value_from_json(e, at(where, std::to_string(i++))));
      return Value(std::move(a));
    }
    case Json::value_t::object: {
      if (j.size() == 1 && j.contains("$date")) {
        if (!j["$date"].is_string()) throw InputError(at(where, "$date"), "expected an ISO-8601 string");
        return Value(Datetime{j["$date"].get<std::string>()});
      }
      if (j.size() == 1 && j.contains("$oid")) {
        if (!j["$oid"].is_string() || !is_hex24(j["$oid"].get<std::string>()))
          throw InputError(at(where, "$oid"), "expected a 24-hex-character string");
        return Value(ObjectId{j["$oid"].get<std::string>()});
      }
      return Value(document_from_json(j, where));
    }
    default:
      throw InputError(where, "unsupported JSON value");
  }
}

Document document_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where, "expected a document (JSON object)");
  Document d;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k.empty() || k.find('.') != std::string::npos)
      throw InputError(at(where, k), "attribute names must be non-empty and contain no '.'");
    d.insert(k, value_from_json(it.value(), at(where, k)));
  }
  return d;
}

Collection collection_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where, "expected a collection (JSON array)");
  Collection c;
  std::size_t i = 0;
  for (const auto& e : j) c.push_back(document_from_json(e, at(where, std::to_string(i++))));
  return c;
}

Database database_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where, "expected a database (JSON object of collections)");
  Database db;
  for (auto it = j.begin(); it != j.end(); ++it)
    db.emplace(it.key(), collection_from_json(it.value(), at(where, it.key())));
  return db;
}

Json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Null: return nullptr;
    case Value::Kind::Num: {
      double d = v.as_num();
      if (d == static_cast<double>(static_cast<std::int64_t>(d)) && d > -9e15 && d < 9e15)
        return static_cast<std::int64_t>(d);
      return d;
    }
    case Value::Kind::Str: return v.as_str();
    case Value::Kind::Bool: return v.as_bool();
    case Value::Kind::Datetime: return Json{{"$date", v.as_datetime().iso}};
    case Value::Kind::ObjectId: return Json{{"$oid", v.as_object_id().hex}};
    case Value::Kind::Array: {
      Json a = Json::array();
      for (const auto& e : v.as_array()) a.push_back(value_to_json(e));
      return a;
    }
    case Value::Kind::Doc: return document_to_json(v.as_doc());
  }
  return nullptr;
}

Json document_to_json(const Document& d) {
  Json o = Json::object();
  for (const auto& [k, v] : d) o[k] = value_to_json(v);
  return o;
}

Json collection_to_json(const Collection& c) {
  Json a = Json::array();
  for (const auto& d : c) a.push_back(document_to_json(d));
  return a;
}

ValueType type_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InputError(where, "expected a type object with a \"kind\" field");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "num") return ValueType::num();
  if (kind == "string") return ValueType::str();
  if (kind == "bool") return ValueType::boolean();
  if (kind == "datetime") return ValueType::datetime();
  if (kind == "objectid") return ValueType::object_id();
  if (kind == "array") {
    if (!j.contains("elem")) throw InputError(where, "array type needs \"elem\"");
    return ValueType::array(type_from_json(j["elem"], at(where, "elem")));
  }
  if (kind == "doc") {
    if (!j.contains("fields") || !j["fields"].is_object())
      throw InputError(where, "doc type needs a \"fields\" object");
    DocumentType d;
    for (auto it = j["fields"].begin(); it != j["fields"].end(); ++it)
      d.set(it.key(), type_from_json(it.value(), at(at(where, "fields"), it.key())));
    return ValueType::doc(std::move(d));
  }
  throw InputError(at(where, "kind"), "unknown type kind '" + kind + "'");
}

Json type_to_json(const ValueType& t) {
  switch (t.kind()) {
    case ValueType::Kind::Num: return Json{{"kind", "num"}};
    case ValueType::Kind::Str: return Json{{"kind", "string"}};
    case ValueType::Kind::Bool: return Json{{"kind", "bool"}};
    case ValueType::Kind::Datetime: return Json{{"kind", "datetime"}};
    case ValueType::Kind::ObjectId: return Json{{"kind", "objectid"}};
    case ValueType::Kind::Array: return Json{{"kind", "array"}, {"elem", type_to_json(t.elem())}};
    case ValueType::Kind::Doc: {
      Json fields = Json::object();
      for (const auto& [k, ft] : t.fields()) fields[k] = type_to_json(ft);
      return Json{{"kind", "doc"}, {"fields", fields}};
    }
  }
  return nullptr;
}

Schema schema_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where, "expected a schema object");
  Schema::Map m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    ValueType t = type_from_json(it.value(), at(where, it.key()));
    if (!t.is_array() || !t.elem().is_doc())
      throw InputError(at(where, it.key()), "collection type must be an array of documents");
    m.emplace(it.key(), std::move(t));
  }
  return Schema(std::move(m));
}

Json schema_to_json(const Schema& s) {
  Json o = Json::object();
  for (const auto& [k, t] : s.map()) o[k] = type_to_json(t);
  return o;
}

}  // namespace docsynth
