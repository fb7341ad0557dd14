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

#include "docsynth/abstraction.hpp"

#include <algorithm>
#include <functional>

#include "docsynth/error.hpp"

namespace docsynth {

namespace {

using MaybeSlot = std::optional<Slot>;

DocumentType doc_union(const DocumentType& a, const DocumentType& b) {
  return to_doc_type(type_union(AugmentedType::from(a), AugmentedType::from(b)));
}

DocumentType doc_intersect(const DocumentType& a, const DocumentType& b) {
  return to_doc_type(type_intersect(AugmentedType::from(a), AugmentedType::from(b)));
}

bool both_docs(const Slot& a, const Slot& b) {
  return !a.is_any() && !b.is_any() && a.type().is_doc() && b.type().is_doc();
}

// Attribute-level union: documents recurse, anything else must be equal (⊥ otherwise).
MaybeSlot slot_union(const Slot& a, const Slot& b) {
  if (both_docs(a, b)) return Slot::of(ValueType::doc(doc_union(a.type().fields(), b.type().fields())));
  if (a == b) return a;
  return std::nullopt;
}

MaybeSlot slot_intersect(const Slot& a, const Slot& b) {
  if (both_docs(a, b)) return Slot::of(ValueType::doc(doc_intersect(a.type().fields(), b.type().fields())));
  if (a == b) return a;
  return std::nullopt;
}

bool doc_member(const std::string& name, const DocumentType& t) {
  for (const auto& [k, v] : t) {
    if (k == name) return true;
    if (v.is_doc() && doc_member(name, v.fields())) return true;
  }
  return false;
}

// Leftmost-outermost replacement inside a concrete document type.
DocumentType doc_replace(const DocumentType& t, const std::string& name, const ValueType& v) {
  DocumentType out = t;
  if (t.find(name)) {
    out.set(name, v);
    return out;
  }
  for (const auto& [k, sub] : t) {
    if (sub.is_doc() && doc_member(name, sub.fields())) {
      out.set(k, ValueType::doc(doc_replace(sub.fields(), name, v)));
      return out;
    }
  }
  return out;
}

const char* arity_text(Placeholder::Arity a) { return a == Placeholder::Arity::One ? "?¹" : "?⁺"; }

bool slot_accepts(const Slot& s, const ValueType& t) { return s.is_any() || s.type() == t; }

}  // namespace

std::string key_text(const AttrKey& k) {
  if (const auto* s = std::get_if<std::string>(&k)) return *s;
  const auto& p = std::get<Placeholder>(k);
  return arity_text(p.arity) + std::to_string(p.label);
}

AugmentedType::AugmentedType(std::initializer_list<Entry> entries) {
  for (const auto& [k, s] : entries) set(k, s);
}

AugmentedType AugmentedType::from(const DocumentType& t) {
  AugmentedType out;
  for (const auto& [k, v] : t) out.entries_.emplace_back(k, Slot::of(v));
  return out;
}

const Slot* AugmentedType::find(const AttrKey& k) const {
  for (const auto& e : entries_)
    if (e.first == k) return &e.second;
  return nullptr;
}

void AugmentedType::set(const AttrKey& k, Slot s) {
  for (auto& e : entries_) {
    if (e.first == k) {
      e.second = std::move(s);
      return;
    }
  }
  entries_.emplace_back(k, std::move(s));
}

bool AugmentedType::erase(const AttrKey& k) {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.first == k; });
  if (it == entries_.end()) return false;
  entries_.erase(it);
  return true;
}

bool AugmentedType::has_placeholders() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return std::holds_alternative<Placeholder>(e.first); });
}

std::string AugmentedType::text() const {
  std::string out = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    out += key_text(entries_[i].first) + ": " + entries_[i].second.text();
  }
  return out + "}";
}

std::string AugmentedType::canonical() const {
  std::vector<std::string> named, holes;
  for (const auto& [k, s] : entries_) {
    if (const auto* n = std::get_if<std::string>(&k))
      named.push_back(*n + ": " + s.text());
    else
      holes.push_back(std::string(arity_text(std::get<Placeholder>(k).arity)) + ": " + s.text());
  }
  std::sort(named.begin(), named.end());
  std::sort(holes.begin(), holes.end());
  std::string out = "{";
  for (const auto& n : named) out += n + ", ";
  for (const auto& h : holes) out += h + ", ";
  return out + "}";
}

bool operator==(const AugmentedType& a, const AugmentedType& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, s] : a.entries_) {
    const Slot* o = b.find(k);
    if (!o || !(*o == s)) return false;
  }
  return true;
}

bool equivalent(const AugmentedType& a, const AugmentedType& b) { return a.canonical() == b.canonical(); }

AugmentedType type_union(const AugmentedType& a, const AugmentedType& b) {
  AugmentedType out;
  for (const auto& [k, s] : a.entries()) {
    const Slot* o = b.find(k);
    if (!o) {
      out.set(k, s);
    } else if (auto u = slot_union(s, *o)) {
      out.set(k, *u);
    }
  }
  for (const auto& [k, s] : b.entries())
    if (!a.find(k)) out.set(k, s);
  return out;
}

AugmentedType type_intersect(const AugmentedType& a, const AugmentedType& b) {
  AugmentedType out;
  for (const auto& [k, s] : a.entries())
    if (const Slot* o = b.find(k))
      if (auto i = slot_intersect(s, *o)) out.set(k, *i);
  return out;
}

bool type_subset(const AugmentedType& a, const AugmentedType& b) {
  return type_intersect(a, b) == a && type_union(a, b) == b;
}

AugmentedType type_subtract(const AugmentedType& a, const AugmentedType& b) {
  if (!type_subset(b, a)) throw NotASubset(b.text() + " is not a subset of " + a.text());
  AugmentedType out;
  for (const auto& [k, s] : a.entries())
    if (!b.find(k)) out.set(k, s);
  return out;
}

bool type_member(const AttrKey& attr, const AugmentedType& t) {
  if (t.find(attr)) return true;
  const auto* name = std::get_if<std::string>(&attr);
  if (!name) return false;
  for (const auto& [k, s] : t.entries())
    if (!s.is_any() && s.type().is_doc() && doc_member(*name, s.type().fields())) return true;
  return false;
}

AugmentedType type_replace(const AugmentedType& t, const AttrKey& attr, const Slot& s) {
  AugmentedType out = t;
  if (t.find(attr)) {
    out.set(attr, s);
    return out;
  }
  const auto* name = std::get_if<std::string>(&attr);
  if (!name) return out;
  for (const auto& [k, sub] : t.entries()) {
    if (!sub.is_any() && sub.type().is_doc() && doc_member(*name, sub.type().fields())) {
      if (s.is_any()) throw Error("Any cannot be placed inside a nested document");
      out.set(k, Slot::of(ValueType::doc(doc_replace(sub.type().fields(), *name, s.type()))));
      return out;
    }
  }
  return out;
}

AugmentedType type_replace_at(const AugmentedType& t, const AccessPath& h, const ValueType& v) {
  const Slot* s = t.find(AttrKey(h.head()));
  if (!s) throw Error("no attribute " + h.str() + " in " + t.text());
  AugmentedType out = t;
  if (h.length() == 1) {
    out.set(h.head(), Slot::of(v));
    return out;
  }
  std::function<ValueType(const ValueType&, std::size_t)> go = [&](const ValueType& cur, std::size_t i) {
    if (!cur.is_doc()) throw Error("no attribute " + h.str() + " in " + t.text());
    const auto& segs = h.segments();
    const ValueType* next = cur.fields().find(segs[i]);
    if (!next) throw Error("no attribute " + h.str() + " in " + t.text());
    DocumentType fields = cur.fields();
    fields.set(segs[i], i + 1 == segs.size() ? v : go(*next, i + 1));
    return ValueType::doc(std::move(fields));
  };
  if (s->is_any()) throw Error("no attribute " + h.str() + " in " + t.text());
  out.set(h.head(), Slot::of(go(s->type(), 1)));
  return out;
}

DocumentType to_doc_type(const AugmentedType& t) {
  DocumentType out;
  for (const auto& [k, s] : t.entries())
    if (const auto* n = std::get_if<std::string>(&k); n && !s.is_any()) out.set(*n, s.type());
  return out;
}

bool matches(const DocumentType& t, const AugmentedType& aug) {
  // Named entries must be present with the same type.
  std::vector<std::string> rest;
  std::vector<const Slot*> ones, pluses;
  for (const auto& [k, s] : aug.entries()) {
    if (const auto* n = std::get_if<std::string>(&k)) {
      const ValueType* v = t.find(*n);
      if (!v || !slot_accepts(s, *v)) return false;
    } else if (std::get<Placeholder>(k).arity == Placeholder::Arity::One) {
      ones.push_back(&s);
    } else {
      pluses.push_back(&s);
    }
  }
  for (const auto& [k, v] : t)
    if (!aug.find(AttrKey(k))) rest.push_back(k);  // map order is lexicographic
  if (rest.size() < ones.size() + pluses.size()) return false;
  if (pluses.empty() && rest.size() != ones.size()) return false;

  std::vector<bool> used(rest.size(), false);
  std::vector<std::size_t> plus_count(pluses.size(), 0);

  // Every attribute left after the ?¹ choices goes to some ?⁺; each ?⁺ needs one.
  std::function<bool(std::size_t, std::size_t)> assign_plus = [&](std::size_t i, std::size_t empty) -> bool {
    while (i < rest.size() && used[i]) ++i;
    if (i == rest.size()) return empty == 0;
    std::size_t left = 0;
    for (std::size_t j = i; j < rest.size(); ++j) left += !used[j];
    if (left < empty) return false;
    const ValueType& ty = *t.find(rest[i]);
    for (std::size_t p = 0; p < pluses.size(); ++p) {
      if (!slot_accepts(*pluses[p], ty)) continue;
      bool was_empty = plus_count[p]++ == 0;
      bool ok = assign_plus(i + 1, empty - (was_empty ? 1 : 0));
      --plus_count[p];
      if (ok) return true;
    }
    return false;
  };

  std::function<bool(std::size_t)> assign_one = [&](std::size_t o) -> bool {
    if (o == ones.size()) return assign_plus(0, pluses.size());
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (used[i] || !slot_accepts(*ones[o], *t.find(rest[i]))) continue;
      used[i] = true;
      bool ok = assign_one(o + 1);
      used[i] = false;
      if (ok) return true;
    }
    return false;
  };
  return assign_one(0);
}

std::string AbstractCollection::text() const { return "(" + type.text() + ", " + formula.text() + ")"; }

bool concretizes(std::size_t size, const std::optional<DocumentType>& type, const AbstractCollection& ac,
                 const SizeSolver& solver) {
  if (size > 0 && (!type || !matches(*type, ac.type))) return false;
  return solver.is_sat(ac.formula, SizeProbe{ac.result_var, static_cast<std::int64_t>(size)});
}

bool concretizes(const Collection& c, const AbstractCollection& ac, const SizeSolver& solver) {
  std::optional<DocumentType> t;
  if (!c.empty()) {
    try {
      t = infer_collection_type(c);
    } catch (const Error&) {
      return false;
    }
  }
  return concretizes(c.size(), t, ac, solver);
}

AbstractDatabase abstract_db_of(const Database& input, const Schema& s) {
  AbstractDatabase out;
  for (const auto& [name, coll] : input) {
    DocumentType t;
    if (const ValueType* ct = s.find(name)) t = ct->elem().fields();
    out.emplace(name, AbstractCollection{AugmentedType::from(t),
                                         SizeFormula::grounded(static_cast<std::int64_t>(coll.size())), 0});
  }
  return out;
}

}  // namespace docsynth
