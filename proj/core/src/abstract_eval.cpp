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

#include "docsynth/abstract_eval.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "docsynth/error.hpp"

namespace docsynth {

namespace {

void collect_arrays(const DocumentType& t, const AccessPath& prefix, std::vector<AccessPath>& out) {
  for (const auto& [k, v] : t) {
    AccessPath h = prefix.empty() ? AccessPath({k}) : prefix.child(k);
    if (v.is_array()) out.push_back(h);
    else if (v.is_doc()) collect_arrays(v.fields(), h, out);
  }
}

// Successor types of one stage; the formula atom is added by the caller.
std::vector<AugmentedType> step(const AbstractDatabase& adb, const AugmentedType& out_aug, const AugmentedType& t,
                                OpKind op, int id, const AbsEvalOptions& opts) {
  std::vector<AugmentedType> next;
  switch (op) {
    case OpKind::Match: next.push_back(t); break;
    case OpKind::Project: {
      AugmentedType concrete = AugmentedType::from(to_doc_type(t));
      next.push_back(type_union(type_subtract(t, concrete), type_intersect(concrete, out_aug)));
      break;
    }
    case OpKind::AddFields: {
      AugmentedType fresh{{Placeholder{Placeholder::Arity::Plus, id}, Slot::any()}};
      next.push_back(type_union(t, fresh));
      break;
    }
    case OpKind::Unwind: {
      DocumentType named = to_doc_type(t);
      for (const auto& h : unwindable_paths(named)) {
        const ValueType* at = nullptr;
        const DocumentType* cur = &named;
        for (std::size_t i = 0; i < h.length(); ++i) {
          at = cur->find(h.segments()[i]);
          if (i + 1 < h.length()) cur = &at->fields();
        }
        next.push_back(type_replace_at(t, h, at->elem()));
      }
      break;
    }
    case OpKind::Lookup: {
      for (const auto& [name, coll] : adb) {
        ValueType joined = ValueType::array(ValueType::doc(to_doc_type(coll.type)));
        AugmentedType fresh{{Placeholder{Placeholder::Arity::One, id}, Slot::of(joined)}};
        next.push_back(type_union(t, fresh));
      }
      break;
    }
    case OpKind::Group: {
      DocumentType named = to_doc_type(t);
      std::vector<std::pair<std::string, ValueType>> attrs(named.begin(), named.end());
      std::vector<DocumentType> key_sets;
      std::function<void(std::size_t, DocumentType&)> pick = [&](std::size_t from, DocumentType& cur) {
        key_sets.push_back(cur);
        if (static_cast<int>(cur.size()) >= opts.max_group_keys) return;
        for (std::size_t i = from; i < attrs.size(); ++i) {
          cur.set(attrs[i].first, attrs[i].second);
          pick(i + 1, cur);
          cur.erase(attrs[i].first);
        }
      };
      DocumentType empty;
      pick(0, empty);
      for (const auto& keys : key_sets) {
        AugmentedType g{{"_id", Slot::of(ValueType::doc(keys))}};
        next.push_back(g);
        g.set(Placeholder{Placeholder::Arity::Plus, id}, Slot::of(ValueType::num()));
        next.push_back(g);
      }
      break;
    }
  }
  return next;
}

SizeRel rel_of(OpKind op) {
  switch (op) {
    case OpKind::Match: return SizeRel::Le;
    case OpKind::Unwind: return SizeRel::Ge;
    case OpKind::Group: return SizeRel::Lt;
    case OpKind::Project:
    case OpKind::AddFields:
    case OpKind::Lookup: return SizeRel::Eq;
  }
  return SizeRel::Eq;
}

}  // namespace

std::vector<int> assign_ids(const Sketch& sk) {
  std::vector<int> ids(sk.ops.size() + 1);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

std::vector<AccessPath> unwindable_paths(const DocumentType& t) {
  std::vector<AccessPath> out;
  collect_arrays(t, AccessPath(), out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AbstractCollection> abs_eval_from(const AbstractDatabase& adb, const DocumentType& out_type,
                                              const AbstractCollection& start, const std::vector<OpKind>& ops,
                                              const AbsEvalOptions& opts) {
  const AugmentedType out_aug = AugmentedType::from(out_type);
  SizeFormula formula = start.formula;
  std::vector<AugmentedType> types{start.type};
  for (std::size_t i = 0; i < ops.size(); ++i) {
    int id = start.result_var + static_cast<int>(i) + 1;
    std::vector<AugmentedType> next;
    std::set<std::string> seen;
    for (const auto& t : types)
      for (auto& n : step(adb, out_aug, t, ops[i], id, opts))
        if (seen.insert(n.canonical()).second) next.push_back(std::move(n));
    types = std::move(next);
    formula = formula.extend(rel_of(ops[i]));
  }

  std::vector<AbstractCollection> out;
  out.reserve(types.size());
  int result = start.result_var + static_cast<int>(ops.size());
  for (auto& t : types) out.push_back(AbstractCollection{std::move(t), formula, result});
  return out;
}

std::vector<AbstractCollection> abs_eval(const AbstractDatabase& adb, const DocumentType& out_type, const Sketch& sk,
                                         const AbsEvalOptions& opts) {
  auto it = adb.find(sk.collection);
  if (it == adb.end()) throw UnknownCollection(sk.collection);
  return abs_eval_from(adb, out_type, it->second, sk.ops, opts);
}

std::string lambda_text(const std::vector<AbstractCollection>& lambda) {
  std::string out = "{";
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i) out += ", ";
    out += lambda[i].text();
  }
  return out + "}";
}

}  // namespace docsynth
