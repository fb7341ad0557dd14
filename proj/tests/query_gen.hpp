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

// Random query generators: purely syntactic ones for printer/parser
// round trips, and typed ones that build a pipeline stage by stage against
// concrete data.

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <docsynth/error.hpp>
#include <docsynth/eval.hpp>
#include <docsynth/query.hpp>
#include <docsynth/types.hpp>

namespace qgen {

using namespace docsynth;

class SyntaxGen {
 public:
  explicit SyntaxGen(std::mt19937& rng) : rng_(rng) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string name() {
    static const std::vector<std::string> names{"a", "b", "_id", "x1", "$v", "with space", "9lives", "Match",
                                                "true", "tick`s", "abs", "null"};
    return names[static_cast<std::size_t>(uniform(0, static_cast<int>(names.size()) - 1))];
  }

  AccessPath path() {
    std::vector<std::string> segs;
    int n = uniform(1, 3);
    for (int i = 0; i < n; ++i) segs.push_back(name());
    return AccessPath(std::move(segs));
  }

  std::vector<AccessPath> paths(int lo) {
    std::vector<AccessPath> out;
    int n = uniform(lo, 3);
    for (int i = 0; i < n; ++i) out.push_back(path());
    return out;
  }

  Value constant() {
    switch (uniform(0, 7)) {
      case 0: return Value(uniform(-5, 5));
      case 1: return Value(uniform(-50, 50) / 4.0);
      case 2: return Value("s\"q\\" + name());
      case 3: return Value(uniform(0, 1) == 1);
      case 4: return Value();
      case 5: return Value(Datetime{"2024-03-0" + std::to_string(uniform(1, 9)) + "T10:00:00Z"});
      case 6: return Value(ObjectId{"65a1b2c3d4e5f60718293a4" + std::to_string(uniform(0, 9))});
      default: return Value(1e-7 * uniform(1, 9));
    }
  }

  Pred pred(int depth) {
    int k = uniform(0, depth > 0 ? 7 : 4);
    switch (k) {
      case 0: return uniform(0, 1) ? Pred::truth() : Pred::falsity();
      case 1:
      case 2: return Pred::cmp(path(), static_cast<CmpOp>(uniform(0, 5)), constant());
      case 3: return Pred::size_eq(path(), uniform(0, 4));
      case 4: return Pred::exists(path());
      case 5: return Pred::conj(pred(depth - 1), pred(depth - 1));
      case 6: return Pred::disj(pred(depth - 1), pred(depth - 1));
      default: return Pred::negate(pred(depth - 1));
    }
  }

  Expr expr() {
    switch (uniform(0, 2)) {
      case 0: return Expr::path(path());
      case 1: return Expr::arith(path(), static_cast<ArithOp>(uniform(0, 4)), path());
      default: return Expr::call(static_cast<MathFn>(uniform(0, 2)), path());
    }
  }

  Agg agg() {
    auto k = static_cast<AggKind>(uniform(0, 4));
    return k == AggKind::Count ? Agg::count() : Agg::of(k, path());
  }

  Stage stage() {
    switch (uniform(0, 5)) {
      case 0: return ProjectStage{paths(1)};
      case 1: return MatchStage{pred(2)};
      case 2: {
        AddFieldsStage s;
        int n = uniform(1, 3);
        for (int i = 0; i < n; ++i) {
          s.paths.push_back(path());
          s.exprs.push_back(expr());
        }
        return s;
      }
      case 3: return UnwindStage{path()};
      case 4: {
        GroupStage g;
        g.keys = paths(1);
        int n = uniform(0, 2);
        for (int i = 0; i < n; ++i) {
          g.names.push_back(name());
          g.aggs.push_back(agg());
        }
        return g;
      }
      default: return LookupStage{path(), path(), name(), name()};
    }
  }

 private:
  std::mt19937& rng_;
};

inline Query random_syntax(std::mt19937& rng, int max_stages) {
  SyntaxGen g(rng);
  Query q(g.name());
  int n = g.uniform(0, max_stages);
  for (int i = 0; i < n; ++i) q.stages.push_back(g.stage());
  return q;
}


struct TypedOptions {
  /// Restrict generation to pipelines the abstract semantics is exact for:
  /// Project keeps every generated attribute and is only followed by stages
  /// that keep its attributes; generated attributes are never unwound or
  /// used as group keys; group keys are top-level; aggregates are numeric;
  /// Group must strictly shrink a non-empty input.
  bool abstraction_exact = false;
  bool allow_lookup = true;
  bool allow_div = false;
};

class TypedGen {
 public:
  TypedGen(std::mt19937& rng, TypedOptions opts) : rng_(rng), opts_(opts) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(uniform(0, static_cast<int>(xs.size()) - 1))];
  }

  /// Random pipeline of up to `depth` stages over `coll`.
  Query generate(const Database& db, const std::string& coll, int depth) {
    Query q(coll);
    Collection cur = db.at(coll);
    generated_.clear();
    after_project_ = false;
    int n = uniform(1, depth);
    for (int i = 0; i < n; ++i) {
      bool added = false;
      for (int attempt = 0; attempt < 8 && !added; ++attempt) {
        auto st = stage(db, cur);
        if (!st) continue;
        Collection next;
        try {
          next = eval_stage(db, cur, *st);
        } catch (const Error&) {
          continue;
        }
        if (opts_.abstraction_exact && std::holds_alternative<GroupStage>(*st) &&
            (cur.empty() || next.size() >= cur.size()))
          continue;
        commit(*st);
        q.stages.push_back(std::move(*st));
        cur = std::move(next);
        added = true;
      }
      if (!added) break;
    }
    return q;
  }

 private:
  struct Typed {
    AccessPath path;
    ValueType type;
  };

  static void collect(const DocumentType& t, const AccessPath* prefix, std::vector<Typed>& out) {
    for (const auto& [name, ft] : t) {
      AccessPath h = prefix ? prefix->child(name) : AccessPath({name});
      out.push_back({h, ft});
      if (ft.is_doc()) collect(ft.fields(), &h, out);
    }
  }

  bool is_generated(const AccessPath& h) const { return generated_.count(h.head()) > 0; }

  std::string fresh() { return "n" + std::to_string(counter_++); }

  void commit(const Stage& s) {
    // sticky: everything after a Project must keep the attributes it kept
    after_project_ = after_project_ || std::holds_alternative<ProjectStage>(s);
    if (auto* a = std::get_if<AddFieldsStage>(&s))
      for (const auto& h : a->paths) generated_.insert(h.head());
    if (auto* g = std::get_if<GroupStage>(&s)) {
      generated_.clear();
      for (const auto& n : g->names) generated_.insert(n);
    }
    if (auto* l = std::get_if<LookupStage>(&s)) generated_.insert(l->as);
  }

  std::optional<Stage> stage(const Database& db, const Collection& cur) {
    InferOptions lenient;
    lenient.lenient = true;
    DocumentType t = infer_collection_type(cur, lenient);
    std::vector<Typed> paths;
    collect(t, nullptr, paths);
    if (paths.empty()) return std::nullopt;

    std::vector<OpKind> ops{OpKind::Project, OpKind::Match, OpKind::AddFields, OpKind::Unwind, OpKind::Group};
    if (opts_.allow_lookup) ops.push_back(OpKind::Lookup);
    if (opts_.abstraction_exact && after_project_)
      ops = {OpKind::Project, OpKind::Match, OpKind::AddFields};
    if (opts_.abstraction_exact && after_project_ && opts_.allow_lookup) ops.push_back(OpKind::Lookup);

    switch (pick(ops)) {
      case OpKind::Project: return project(t, paths);
      case OpKind::Match: return MatchStage{pred(cur, paths, 1)};
      case OpKind::AddFields: return add_fields(paths);
      case OpKind::Unwind: return unwind(paths);
      case OpKind::Group: return group(t, paths);
      case OpKind::Lookup: return lookup(db, paths);
    }
    return std::nullopt;
  }

  std::optional<Stage> project(const DocumentType& t, const std::vector<Typed>& paths) {
    ProjectStage p;
    for (const auto& [name, ft] : t) {
      AccessPath h({name});
      if (opts_.abstraction_exact && is_generated(h)) {
        p.paths.push_back(h);
        continue;
      }
      if (!coin(0.6)) continue;
      if (ft.is_doc() && !ft.fields().empty() && coin(0.3)) {
        std::vector<AccessPath> inner;
        for (const auto& x : paths)
          if (x.path.length() == 2 && x.path.head() == name) inner.push_back(x.path);
        if (!inner.empty()) {
          p.paths.push_back(pick(inner));
          continue;
        }
      }
      p.paths.push_back(h);
    }
    // generated attributes without an inferable type (e.g. empty joins) too
    if (opts_.abstraction_exact)
      for (const auto& n : generated_)
        if (!t.find(n)) p.paths.push_back(AccessPath({n}));
    if (p.paths.empty()) p.paths.push_back(pick(paths).path);
    return p;
  }

  Pred atom(const Collection& cur, const std::vector<Typed>& paths) {
    const Typed& x = pick(paths);
    int k = uniform(0, 9);
    if (k == 0) return coin() ? Pred::truth() : Pred::exists(x.path);
    if (x.type.is_array()) {
      std::vector<double> sizes;
      for (const auto& d : cur)
        if (const Value* v = get_path(d, x.path); v && v->is_array()) sizes.push_back(static_cast<double>(v->as_array().size()));
      return Pred::size_eq(x.path, sizes.empty() ? 1.0 : pick(sizes));
    }
    if (!x.type.is_primitive()) return Pred::exists(x.path);
    std::vector<Value> seen;
    for (const auto& d : cur)
      if (const Value* v = get_path(d, x.path)) seen.push_back(*v);
    Value c = seen.empty() ? Value(1) : pick(seen);
    auto op = static_cast<CmpOp>(uniform(0, 5));
    return Pred::cmp(x.path, op, c);
  }

  Pred pred(const Collection& cur, const std::vector<Typed>& paths, int depth) {
    int k = depth > 0 ? uniform(0, 9) : 0;
    if (k <= 6) return atom(cur, paths);
    if (k == 7) return Pred::conj(atom(cur, paths), atom(cur, paths));
    if (k == 8) return Pred::disj(atom(cur, paths), atom(cur, paths));
    return Pred::negate(atom(cur, paths));
  }

  std::vector<AccessPath> nums(const std::vector<Typed>& paths) const {
    std::vector<AccessPath> out;
    for (const auto& x : paths)
      if (x.type.kind() == ValueType::Kind::Num) out.push_back(x.path);
    return out;
  }

  std::optional<Stage> add_fields(const std::vector<Typed>& paths) {
    AddFieldsStage a;
    auto ns = nums(paths);
    int n = uniform(1, 2);
    for (int i = 0; i < n; ++i) {
      a.paths.push_back(AccessPath({fresh()}));
      int k = ns.empty() ? 0 : uniform(0, 2);
      if (k == 0) {
        a.exprs.push_back(Expr::path(pick(paths).path));
      } else if (k == 1) {
        int max_op = opts_.allow_div ? 4 : 2;
        a.exprs.push_back(Expr::arith(pick(ns), static_cast<ArithOp>(uniform(0, max_op)), pick(ns)));
      } else {
        a.exprs.push_back(Expr::call(static_cast<MathFn>(uniform(0, 2)), pick(ns)));
      }
    }
    return a;
  }

  std::optional<Stage> unwind(const std::vector<Typed>& paths) {
    std::vector<AccessPath> arrays;
    for (const auto& x : paths)
      if (x.type.is_array() && !(opts_.abstraction_exact && is_generated(x.path))) arrays.push_back(x.path);
    if (arrays.empty()) return std::nullopt;
    return UnwindStage{pick(arrays)};
  }

  std::optional<Stage> group(const DocumentType& t, const std::vector<Typed>& paths) {
    std::vector<AccessPath> keys;
    for (const auto& [name, ft] : t) {
      AccessPath h({name});
      if (opts_.abstraction_exact && is_generated(h)) continue;
      keys.push_back(h);
    }
    if (keys.empty()) return std::nullopt;
    std::shuffle(keys.begin(), keys.end(), rng_);
    GroupStage g;
    int nk = uniform(1, std::min<int>(2, static_cast<int>(keys.size())));
    g.keys.assign(keys.begin(), keys.begin() + nk);
    auto ns = nums(paths);
    int na = uniform(0, 2);
    for (int i = 0; i < na; ++i) {
      g.names.push_back(fresh());
      auto k = static_cast<AggKind>(uniform(0, 4));
      if (k == AggKind::Count || ns.empty())
        g.aggs.push_back(Agg::count());
      else
        g.aggs.push_back(Agg::of(k, pick(ns)));
    }
    return g;
  }

  std::optional<Stage> lookup(const Database& db, const std::vector<Typed>& paths) {
    std::vector<std::string> colls;
    for (const auto& [name, c] : db) colls.push_back(name);
    const std::string& from = pick(colls);
    InferOptions lenient;
    lenient.lenient = true;
    std::vector<Typed> fpaths;
    collect(infer_collection_type(db.at(from), lenient), nullptr, fpaths);
    std::vector<std::pair<AccessPath, AccessPath>> pairs;
    for (const auto& l : paths)
      for (const auto& f : fpaths)
        if (l.type.is_primitive() && l.type == f.type) pairs.emplace_back(l.path, f.path);
    if (pairs.empty()) return std::nullopt;
    const auto& [local, foreign] = pick(pairs);
    return LookupStage{local, foreign, from, fresh()};
  }

  std::mt19937& rng_;
  TypedOptions opts_;
  std::set<std::string> generated_;
  bool after_project_ = false;
  int counter_ = 0;
};

}  // namespace qgen
