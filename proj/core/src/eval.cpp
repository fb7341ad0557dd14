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

#include "docsynth/eval.hpp"

#include <cmath>
#include <unordered_map>

#include "docsynth/error.hpp"

namespace docsynth {

namespace {

const Value kNull;

const Value& get_or_null(const Document& d, const AccessPath& h) {
  const Value* v = get_path(d, h);
  return v ? *v : kNull;
}

bool less_than(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return false;
  auto c = compare_primitive(a, b);
  return c && *c == std::strong_ordering::less;
}

// Puts `v` at `h` inside `d`. Returns false if blocked by a non-document
// intermediate; keeps existing values when `overwrite` is false.
bool put_path(Document& d, const AccessPath& h, Value v, bool overwrite) {
  Document* cur = &d;
  const auto& segs = h.segments();
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    Value* next = cur->find(segs[i]);
    if (!next) {
      cur->set(segs[i], Value(Document{}));
      next = cur->find(segs[i]);
    }
    if (!next->is_doc()) return false;
    cur = &next->as_doc();
  }
  if (!overwrite && cur->contains(segs.back())) return false;
  cur->set(segs.back(), std::move(v));
  return true;
}

}  // namespace

bool eval_pred(const Document& d, const Pred& p) {
  switch (p.kind()) {
    case Pred::Kind::True: return true;
    case Pred::Kind::False: return false;
    case Pred::Kind::Cmp: {
      const Value& v = get_or_null(d, p.path());
      const Value& c = p.constant();
      switch (p.op()) {
        case CmpOp::Eq: return v == c;
        case CmpOp::Ne: return !(v == c);
        case CmpOp::Lt: return less_than(v, c);
        case CmpOp::Gt: return less_than(c, v);
        case CmpOp::Le: return less_than(v, c) || v == c;
        case CmpOp::Ge: return less_than(c, v) || v == c;
      }
      return false;
    }
    case Pred::Kind::SizeEq: {
      const Value& v = get_or_null(d, p.path());
      return v.is_array() && static_cast<double>(v.as_array().size()) == p.constant().as_num();
    }
    case Pred::Kind::Exists: return has_path(d, p.path());
    case Pred::Kind::And: return eval_pred(d, p.lhs()) && eval_pred(d, p.rhs());
    case Pred::Kind::Or: return eval_pred(d, p.lhs()) || eval_pred(d, p.rhs());
    case Pred::Kind::Not: return !eval_pred(d, p.lhs());
  }
  return false;
}

Value eval_expr(const Document& d, const Expr& e) {
  const Value& a = get_or_null(d, e.lhs);
  switch (e.kind) {
    case Expr::Kind::Path: return a;
    case Expr::Kind::Arith: {
      const Value& b = get_or_null(d, e.rhs);
      if (!a.is_num() || !b.is_num()) return Value();
      double x = a.as_num(), y = b.as_num();
      switch (e.aop) {
        case ArithOp::Add: return Value(x + y);
        case ArithOp::Sub: return Value(x - y);
        case ArithOp::Mul: return Value(x * y);
        case ArithOp::Div: return y == 0 ? Value() : Value(x / y);
        case ArithOp::Mod: return y == 0 ? Value() : Value(std::fmod(x, y));
      }
      return Value();
    }
    case Expr::Kind::Fn: {
      if (!a.is_num()) return Value();
      switch (e.fn) {
        case MathFn::Abs: return Value(std::fabs(a.as_num()));
        case MathFn::Floor: return Value(std::floor(a.as_num()));
        case MathFn::Ceil: return Value(std::ceil(a.as_num()));
      }
      return Value();
    }
  }
  return Value();
}

Value eval_agg(const std::vector<const Document*>& docs, const Agg& a) {
  if (a.kind == AggKind::Count) return Value(static_cast<double>(docs.size()));
  double sum = 0;
  std::size_t nums = 0;
  const Value* best = nullptr;
  for (const Document* d : docs) {
    const Value& v = get_or_null(*d, *a.path);
    if (v.is_num()) {
      sum += v.as_num();
      ++nums;
    }
    if (v.is_null()) continue;
    if (!best) {
      best = &v;
    } else if (a.kind == AggKind::Min && total_order(v, *best) < 0) {
      best = &v;
    } else if (a.kind == AggKind::Max && total_order(v, *best) > 0) {
      best = &v;
    }
  }
  switch (a.kind) {
    case AggKind::Sum: return Value(sum);
    case AggKind::Avg: return nums == 0 ? Value() : Value(sum / static_cast<double>(nums));
    case AggKind::Min:
    case AggKind::Max: return best ? *best : Value();
    case AggKind::Count: break;
  }
  return Value();
}

Value eval_agg(const Collection& docs, const Agg& a) {
  std::vector<const Document*> ptrs;
  ptrs.reserve(docs.size());
  for (const auto& d : docs) ptrs.push_back(&d);
  return eval_agg(ptrs, a);
}

Document extract_attrs(const Document& d, const std::vector<AccessPath>& hs) {
  Document out;
  for (const auto& h : hs)
    if (const Value* v = get_path(d, h)) put_path(out, h, *v, false);
  return out;
}

Document add_attrs(Document d, const std::vector<AccessPath>& hs, const std::vector<Value>& vs) {
  for (std::size_t i = 0; i < hs.size() && i < vs.size(); ++i) put_path(d, hs[i], vs[i], false);
  return d;
}

Collection flatten(const Document& d, const AccessPath& h) {
  const Value* v = get_path(d, h);
  if (!v || v->is_null()) return {};
  if (!v->is_array()) throw UnwindNonArray(h.str());
  Collection out;
  out.reserve(v->as_array().size());
  for (const auto& e : v->as_array()) {
    Document copy = d;
    put_path(copy, h, e, true);
    out.push_back(std::move(copy));
  }
  return out;
}

Document group_key(const Document& d, const std::vector<AccessPath>& keys) {
  Document key;
  for (const auto& h : keys) {
    for (const auto& other : keys)
      if (&other != &h && other.last() == h.last())
        throw Error("group keys " + h.str() + " and " + other.str() + " share the name " + h.last());
    if (const Value* v = get_path(d, h)) key.set(h.last(), *v);
  }
  return key;
}

Collection eval_stage(const Database& db, const Collection& in, const Stage& s) {
  Collection out;
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, ProjectStage>) {
          out.reserve(in.size());
          for (const auto& d : in) out.push_back(extract_attrs(d, st.paths));
        } else if constexpr (std::is_same_v<T, MatchStage>) {
          for (const auto& d : in)
            if (eval_pred(d, st.pred)) out.push_back(d);
        } else if constexpr (std::is_same_v<T, AddFieldsStage>) {
          out.reserve(in.size());
          for (const auto& d : in) {
            std::vector<Value> vs;
            vs.reserve(st.exprs.size());
            for (const auto& e : st.exprs) vs.push_back(eval_expr(d, e));
            out.push_back(add_attrs(d, st.paths, vs));
          }
        } else if constexpr (std::is_same_v<T, UnwindStage>) {
          for (const auto& d : in) {
            Collection part = flatten(d, st.path);
            for (auto& x : part) out.push_back(std::move(x));
          }
        } else if constexpr (std::is_same_v<T, GroupStage>) {
          std::vector<Document> keys;
          std::vector<std::vector<const Document*>> members;
          std::unordered_map<std::string, std::size_t> index;
          for (const auto& d : in) {
            Document k = group_key(d, st.keys);
            auto [it, fresh] = index.emplace(canonical_string(k), keys.size());
            if (fresh) {
              keys.push_back(std::move(k));
              members.emplace_back();
            }
            members[it->second].push_back(&d);
          }
          out.reserve(keys.size());
          for (std::size_t g = 0; g < keys.size(); ++g) {
            Document doc;
            doc.set("_id", Value(std::move(keys[g])));
            for (std::size_t i = 0; i < st.names.size(); ++i) doc.insert(st.names[i], eval_agg(members[g], st.aggs[i]));
            out.push_back(std::move(doc));
          }
        } else {
          auto it = db.find(st.from);
          if (it == db.end()) throw UnknownCollection(st.from);
          const Collection& foreign = it->second;
          out.reserve(in.size());
          for (const auto& d : in) {
            const Value& v = get_or_null(d, st.local);
            Array joined;
            for (const auto& f : foreign)
              if (get_or_null(f, st.foreign) == v) joined.push_back(Value(f));
            Document copy = d;
            copy.set(st.as, Value(std::move(joined)));
            out.push_back(std::move(copy));
          }
        }
      },
      s);
  return out;
}

Collection eval_query(const Database& db, const Query& q) {
  auto it = db.find(q.collection);
  if (it == db.end()) throw UnknownCollection(q.collection);
  Collection cur = it->second;
  for (const auto& s : q.stages) cur = eval_stage(db, cur, s);
  return cur;
}

}  // namespace docsynth
