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

#include "docsynth/mongo.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "docsynth/error.hpp"

namespace docsynth {

namespace {

Value field_ref(const AccessPath& h) { return Value("$" + h.str()); }

AccessPath ref_path(const Value& v) {
  if (!v.is_str() || v.as_str().size() < 2 || v.as_str()[0] != '$')
    throw Error("pipeline: expected a field reference, got " + to_display(v));
  return AccessPath::parse(std::string_view(v.as_str()).substr(1));
}

Document single(std::string key, Value v) {
  Document d;
  d.set(std::move(key), std::move(v));
  return d;
}

std::string cmp_key(CmpOp op) {
  switch (op) {
    case CmpOp::Gt: return "$gt";
    case CmpOp::Ge: return "$gte";
    case CmpOp::Lt: return "$lt";
    case CmpOp::Le: return "$lte";
    case CmpOp::Eq: return "$eq";
    case CmpOp::Ne: return "$ne";
  }
  return "$eq";
}

std::string arith_key(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "$add";
    case ArithOp::Sub: return "$subtract";
    case ArithOp::Mul: return "$multiply";
    case ArithOp::Div: return "$divide";
    case ArithOp::Mod: return "$mod";
  }
  return "$add";
}

std::string fn_key(MathFn f) {
  switch (f) {
    case MathFn::Abs: return "$abs";
    case MathFn::Floor: return "$floor";
    case MathFn::Ceil: return "$ceil";
  }
  return "$abs";
}

std::string agg_key(AggKind k) {
  switch (k) {
    case AggKind::Sum: return "$sum";
    case AggKind::Avg: return "$avg";
    case AggKind::Min: return "$min";
    case AggKind::Max: return "$max";
    case AggKind::Count: return "$count";
  }
  return "$count";
}

// Operator document for an atom on a field: {$gt: c}, {$size: n}, {$exists: true}.
Document atom_op(const Pred& p) {
  switch (p.kind()) {
    case Pred::Kind::Cmp: return single(cmp_key(p.op()), p.constant());
    case Pred::Kind::SizeEq: return single("$size", p.constant());
    case Pred::Kind::Exists: return single("$exists", Value(true));
    default: throw Error("pipeline: not a field predicate");
  }
}

bool field_atom(const Pred& p) {
  return p.kind() == Pred::Kind::Cmp || p.kind() == Pred::Kind::SizeEq || p.kind() == Pred::Kind::Exists;
}

Document pred_doc(const Pred& p) {
  switch (p.kind()) {
    case Pred::Kind::True: return Document{};
    case Pred::Kind::False: return single("$expr", Value(false));
    case Pred::Kind::Cmp:
    case Pred::Kind::SizeEq:
    case Pred::Kind::Exists: return single(p.path().str(), atom_op(p));
    case Pred::Kind::And: return single("$and", Array{pred_doc(p.lhs()), pred_doc(p.rhs())});
    case Pred::Kind::Or: return single("$or", Array{pred_doc(p.lhs()), pred_doc(p.rhs())});
    case Pred::Kind::Not:
      // $not only applies to a field's operator; whole filters negate via $nor.
      if (field_atom(p.lhs())) return single(p.lhs().path().str(), single("$not", atom_op(p.lhs())));
      return single("$nor", Array{pred_doc(p.lhs())});
  }
  return Document{};
}

Value expr_value(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Path: return field_ref(e.lhs);
    case Expr::Kind::Arith: return single(arith_key(e.aop), Array{field_ref(e.lhs), field_ref(e.rhs)});
    case Expr::Kind::Fn: return single(fn_key(e.fn), field_ref(e.lhs));
  }
  return Value();
}

Value agg_value(const Agg& a) {
  if (a.kind == AggKind::Count) return single("$count", Document{});
  return single(agg_key(a.kind), field_ref(*a.path));
}

bool touches_id(const AccessPath& h) { return h.segments().front() == "_id"; }

Document stage_doc(const Stage& s) {
  return std::visit(
      [](const auto& st) -> Document {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, ProjectStage>) {
          Document d;
          if (std::none_of(st.paths.begin(), st.paths.end(), touches_id)) d.set("_id", Value(0));
          for (const auto& h : st.paths) d.set(h.str(), Value(1));
          return single("$project", d);
        } else if constexpr (std::is_same_v<T, MatchStage>) {
          return single("$match", pred_doc(st.pred));
        } else if constexpr (std::is_same_v<T, AddFieldsStage>) {
          Document d;
          for (std::size_t i = 0; i < st.paths.size(); ++i) d.set(st.paths[i].str(), expr_value(st.exprs[i]));
          return single("$addFields", d);
        } else if constexpr (std::is_same_v<T, UnwindStage>) {
          return single("$unwind", field_ref(st.path));
        } else if constexpr (std::is_same_v<T, GroupStage>) {
          Document d;
          if (st.keys.size() == 1) {
            d.set("_id", field_ref(st.keys.front()));
          } else if (st.keys.empty()) {
            d.set("_id", Value());
          } else {
            Document key;
            for (const auto& h : st.keys) key.set(h.segments().back(), field_ref(h));
            d.set("_id", key);
          }
          for (std::size_t i = 0; i < st.names.size(); ++i) d.set(st.names[i], agg_value(st.aggs[i]));
          return single("$group", d);
        } else {
          Document d;
          d.set("from", Value(st.from));
          d.set("localField", Value(st.local.str()));
          d.set("foreignField", Value(st.foreign.str()));
          d.set("as", Value(st.as));
          return single("$lookup", d);
        }
      },
      s);
}

const std::string& stage_op(const Document& stage) {
  if (stage.size() != 1) throw Error("pipeline: stage must have exactly one operator");
  return stage.fields().front().first;
}

const Document& stage_body(const Document& stage) {
  const Value& v = stage.fields().front().second;
  if (!v.is_doc()) throw Error("pipeline: " + stage_op(stage) + " expects a document");
  return v.as_doc();
}

bool prefix_related(const AccessPath& a, const AccessPath& b) {
  std::size_t n = std::min(a.length(), b.length());
  for (std::size_t i = 0; i < n; ++i)
    if (a.segments()[i] != b.segments()[i]) return false;
  return true;
}

bool is_prefix(const AccessPath& a, const AccessPath& b) { return a.length() <= b.length() && prefix_related(a, b); }

void collect_refs(const Value& v, std::vector<AccessPath>& out) {
  if (v.is_str() && v.as_str().size() > 1 && v.as_str()[0] == '$') {
    out.push_back(ref_path(v));
  } else if (v.is_array()) {
    for (const auto& e : v.as_array()) collect_refs(e, out);
  } else if (v.is_doc()) {
    for (const auto& [k, e] : v.as_doc()) collect_refs(e, out);
  }
}

// Inclusion paths of a pure inclusion $project; nullopt if it computes values.
std::optional<std::vector<AccessPath>> inclusions(const Document& body) {
  std::vector<AccessPath> out;
  for (const auto& [k, v] : body) {
    if (!v.is_num()) return std::nullopt;
    if (v.as_num() == 1) out.push_back(AccessPath::parse(k));
    else if (k != "_id") return std::nullopt;
  }
  return out;
}

std::optional<Document> merge_add_fields(const Document& a, const Document& b) {
  std::vector<AccessPath> a_keys;
  for (const auto& [k, v] : a) a_keys.push_back(AccessPath::parse(k));
  for (const auto& [k, v] : b) {
    AccessPath kb = AccessPath::parse(k);
    std::vector<AccessPath> refs;
    collect_refs(v, refs);
    for (const auto& ka : a_keys) {
      if (prefix_related(ka, kb)) return std::nullopt;
      for (const auto& r : refs)
        if (prefix_related(ka, r)) return std::nullopt;
    }
  }
  Document out = a;
  for (const auto& [k, v] : b) out.set(k, v);
  return out;
}

std::optional<Document> merge_projects(const Document& first, const Document& second) {
  auto p1 = inclusions(first);
  auto p2 = inclusions(second);
  if (!p1 || !p2) return std::nullopt;
  for (const auto& h : *p2) {
    bool covered = std::any_of(p1->begin(), p1->end(), [&](const AccessPath& g) { return is_prefix(g, h); });
    if (!covered) return std::nullopt;
  }
  return second;
}

std::optional<Document> fold_into_project(const Document& add, const Document& proj) {
  auto kept = inclusions(proj);
  if (!kept) return std::nullopt;
  for (const auto& [k, v] : add) {
    AccessPath h = AccessPath::parse(k);
    if (!proj.find(k)) return std::nullopt;
    for (const auto& g : *kept)
      if (!(g == h) && prefix_related(g, h)) return std::nullopt;
  }
  Document out = proj;
  for (const auto& [k, v] : add) out.set(k, v);
  return out;
}

Pred atom_of(const AccessPath& h, const Document& op) {
  if (op.size() != 1) throw Error("pipeline: field predicate needs exactly one operator");
  const auto& [k, v] = op.fields().front();
  if (k == "$size") return Pred::size_eq(h, v.as_num());
  if (k == "$exists") return Pred::exists(h);
  if (k == "$not") return Pred::negate(atom_of(h, v.as_doc()));
  for (CmpOp c : {CmpOp::Gt, CmpOp::Ge, CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ne})
    if (k == cmp_key(c)) return Pred::cmp(h, c, v);
  throw Error("pipeline: unknown field operator " + k);
}

Pred pred_of(const Document& d) {
  if (d.empty()) return Pred::truth();
  std::vector<Pred> parts;
  for (const auto& [k, v] : d) {
    auto fold = [&](bool conj) {
      const auto& xs = v.as_array();
      if (xs.empty()) throw Error("pipeline: empty " + k);
      Pred acc = pred_of(xs.front().as_doc());
      for (std::size_t i = 1; i < xs.size(); ++i)
        acc = conj ? Pred::conj(acc, pred_of(xs[i].as_doc())) : Pred::disj(acc, pred_of(xs[i].as_doc()));
      return acc;
    };
    if (k == "$expr") parts.push_back(v.is_bool() && v.as_bool() ? Pred::truth() : Pred::falsity());
    else if (k == "$and") parts.push_back(fold(true));
    else if (k == "$or") parts.push_back(fold(false));
    else if (k == "$nor") parts.push_back(Pred::negate(fold(false)));
    else if (v.is_doc()) parts.push_back(atom_of(AccessPath::parse(k), v.as_doc()));
    else parts.push_back(Pred::cmp(AccessPath::parse(k), CmpOp::Eq, v));
  }
  Pred acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Pred::conj(acc, parts[i]);
  return acc;
}

Expr expr_of(const Value& v) {
  if (v.is_str()) return Expr::path(ref_path(v));
  if (!v.is_doc() || v.as_doc().size() != 1) throw Error("pipeline: unsupported expression " + to_display(v));
  const auto& [k, arg] = v.as_doc().fields().front();
  for (MathFn f : {MathFn::Abs, MathFn::Floor, MathFn::Ceil})
    if (k == fn_key(f)) return Expr::call(f, ref_path(arg));
  for (ArithOp op : {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div, ArithOp::Mod})
    if (k == arith_key(op)) {
      const auto& xs = arg.as_array();
      if (xs.size() != 2) throw Error("pipeline: " + k + " takes two operands");
      return Expr::arith(ref_path(xs[0]), op, ref_path(xs[1]));
    }
  throw Error("pipeline: unsupported expression operator " + k);
}

Agg agg_of(const Value& v) {
  if (!v.is_doc() || v.as_doc().size() != 1) throw Error("pipeline: unsupported accumulator " + to_display(v));
  const auto& [k, arg] = v.as_doc().fields().front();
  if (k == "$count") return Agg::count();
  for (AggKind a : {AggKind::Sum, AggKind::Avg, AggKind::Min, AggKind::Max})
    if (k == agg_key(a)) return Agg::of(a, ref_path(arg));
  throw Error("pipeline: unsupported accumulator " + k);
}

bool bare_key(const std::string& k) {
  if (k.empty()) return false;
  std::size_t i = k[0] == '$' ? 1 : 0;
  if (i >= k.size() || std::isdigit(static_cast<unsigned char>(k[i]))) return false;
  for (; i < k.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(k[i]);
    if (!std::isalnum(c) && c != '_' && c != '$') return false;
  }
  return true;
}

std::string shell_text(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Null: return "null";
    case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
    case Value::Kind::Num: return format_number(v.as_num());
    case Value::Kind::Str: return Json(v.as_str()).dump();
    case Value::Kind::Datetime: return "ISODate(" + Json(v.as_datetime().iso).dump() + ")";
    case Value::Kind::ObjectId: return "ObjectId(" + Json(v.as_object_id().hex).dump() + ")";
    case Value::Kind::Array: {
      std::string out = "[";
      bool first = true;
      for (const auto& e : v.as_array()) {
        if (!first) out += ", ";
        first = false;
        out += shell_text(e);
      }
      return out + "]";
    }
    case Value::Kind::Doc: {
      std::string out = "{";
      bool first = true;
      for (const auto& [k, e] : v.as_doc()) {
        if (!first) out += ", ";
        first = false;
        out += bare_key(k) ? k : Json(k).dump();
        out += ": " + shell_text(e);
      }
      return out + "}";
    }
  }
  return "?";
}

}  // namespace

Pipeline translate(const Query& q) {
  Pipeline p{q.collection, {}};
  for (const auto& s : q.stages) p.stages.push_back(stage_doc(s));
  return p;
}

Pipeline optimize(Pipeline p) {
  std::vector<Document> out;
  for (auto& st : p.stages) {
    if (!out.empty()) {
      const std::string& prev = stage_op(out.back());
      const std::string& cur = stage_op(st);
      std::optional<Document> merged;
      if (prev == "$addFields" && cur == "$addFields") merged = merge_add_fields(stage_body(out.back()), stage_body(st));
      else if (prev == "$project" && cur == "$project") merged = merge_projects(stage_body(out.back()), stage_body(st));
      else if (prev == "$addFields" && cur == "$project") merged = fold_into_project(stage_body(out.back()), stage_body(st));
      if (merged) {
        out.back() = single(cur, std::move(*merged));
        continue;
      }
    }
    out.push_back(std::move(st));
  }
  p.stages = std::move(out);
  return p;
}

std::string render_shell(const Pipeline& p) {
  std::string out = "db." + p.collection + ".aggregate([";
  for (std::size_t i = 0; i < p.stages.size(); ++i) {
    out += i ? ",\n  " : "\n  ";
    out += shell_text(Value(p.stages[i]));
  }
  return out + "])";
}

Json pipeline_to_json(const Pipeline& p) {
  Json arr = Json::array();
  for (const auto& st : p.stages) arr.push_back(document_to_json(st));
  return arr;
}

Query to_query(const Pipeline& p) {
  Query q(p.collection);
  for (const auto& stage : p.stages) {
    const std::string& op = stage_op(stage);
    const Value& arg = stage.fields().front().second;
    if (op == "$unwind") {
      q.stages.push_back(UnwindStage{ref_path(arg)});
      continue;
    }
    const Document& body = stage_body(stage);
    if (op == "$match") {
      q.stages.push_back(MatchStage{pred_of(body)});
    } else if (op == "$addFields") {
      AddFieldsStage a;
      for (const auto& [k, v] : body) {
        a.paths.push_back(AccessPath::parse(k));
        a.exprs.push_back(expr_of(v));
      }
      q.stages.push_back(std::move(a));
    } else if (op == "$project") {
      // computed fields came from a folded $addFields
      AddFieldsStage computed;
      ProjectStage proj;
      for (const auto& [k, v] : body) {
        if (v.is_num()) {
          if (v.as_num() == 1) proj.paths.push_back(AccessPath::parse(k));
          continue;
        }
        computed.paths.push_back(AccessPath::parse(k));
        computed.exprs.push_back(expr_of(v));
        proj.paths.push_back(AccessPath::parse(k));
      }
      if (!computed.paths.empty()) q.stages.push_back(std::move(computed));
      q.stages.push_back(std::move(proj));
    } else if (op == "$group") {
      GroupStage g;
      for (const auto& [k, v] : body) {
        if (k == "_id") {
          if (v.is_str()) g.keys.push_back(ref_path(v));
          else if (v.is_doc())
            for (const auto& [kk, kv] : v.as_doc()) g.keys.push_back(ref_path(kv));
          continue;
        }
        g.names.push_back(k);
        g.aggs.push_back(agg_of(v));
      }
      q.stages.push_back(std::move(g));
    } else if (op == "$lookup") {
      auto text = [&](const char* k) -> const std::string& {
        const Value* v = body.find(k);
        if (!v || !v->is_str()) throw Error(std::string("pipeline: $lookup needs ") + k);
        return v->as_str();
      };
      q.stages.push_back(LookupStage{AccessPath::parse(text("localField")), AccessPath::parse(text("foreignField")),
                                     text("from"), text("as")});
    } else {
      throw Error("pipeline: unsupported stage " + op);
    }
  }
  return q;
}

}  // namespace docsynth
