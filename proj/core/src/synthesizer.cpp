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

#include "docsynth/synthesizer.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "docsynth/abstract_eval.hpp"
#include "docsynth/abstraction.hpp"
#include "docsynth/eval.hpp"
#include "docsynth/size_formula.hpp"

namespace docsynth {

namespace {

using Clock = std::chrono::steady_clock;

InferOptions lenient() {
  InferOptions o;
  o.lenient = true;
  return o;
}

struct TypedPath {
  AccessPath path;
  ValueType type;
};

void collect_paths(const DocumentType& t, const AccessPath* prefix, std::vector<TypedPath>& out) {
  for (const auto& [name, ft] : t) {
    AccessPath h = prefix ? prefix->child(name) : AccessPath({name});
    out.push_back({h, ft});
    if (ft.is_doc()) collect_paths(ft.fields(), &h, out);
  }
}

// Every path through nested documents (arrays are leaves), lexicographic.
std::vector<TypedPath> typed_paths(const DocumentType& t) {
  std::vector<TypedPath> out;
  collect_paths(t, nullptr, out);
  std::sort(out.begin(), out.end(), [](const TypedPath& a, const TypedPath& b) { return a.path < b.path; });
  return out;
}

DocumentType union_type(const std::vector<Collection>& cs) {
  std::optional<AugmentedType> acc;
  for (const auto& c : cs) {
    if (c.empty()) continue;
    auto t = AugmentedType::from(infer_collection_type(c, lenient()));
    acc = acc ? type_union(*acc, t) : t;
  }
  return acc ? to_doc_type(*acc) : DocumentType{};
}

std::set<std::string> present_names(const std::vector<Collection>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs)
    for (const auto& d : c)
      for (const auto& [k, v] : d) out.insert(k);
  return out;
}

void collect_primitives(const Value& v, std::vector<Value>& out) {
  if (v.is_array()) {
    for (const auto& e : v.as_array()) collect_primitives(e, out);
  } else if (v.is_doc()) {
    for (const auto& [k, e] : v.as_doc()) collect_primitives(e, out);
  } else if (!v.is_null()) {
    out.push_back(v);
  }
}

void add_unique(std::vector<Value>& pool, const Value& v) {
  if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
}

// User constants, then non-string primitives seen in the outputs, then
// null, 0, 1. String literals have to come from the user: output strings let
// the enumerator pick out individual rows by name.
std::vector<Value> constant_pool(const std::vector<Value>& user, const std::vector<Example>& examples) {
  std::vector<Value> pool;
  for (const auto& c : user) add_unique(pool, c);
  for (const auto& ex : examples)
    for (const auto& d : ex.output) {
      std::vector<Value> prims;
      collect_primitives(Value(d), prims);
      for (const auto& p : prims)
        if (!p.is_str()) add_unique(pool, p);
    }
  add_unique(pool, Value());
  add_unique(pool, Value(0));
  add_unique(pool, Value(1));
  return pool;
}

std::string collection_key(const Collection& c) {
  std::string out;
  for (const auto& d : c) {
    out += canonical_string(d);
    out += '\n';
  }
  return out;
}

std::string values_key(const std::vector<Value>& vs) {
  std::string out;
  for (const auto& v : vs) {
    out += canonical_string(v);
    out += '\x1f';
  }
  return out;
}

/// Per-example data shared by deduction checks.
struct ExampleAbstraction {
  AbstractDatabase adb;
  std::optional<DocumentType> out_type;  // nullopt: output untypable
  std::size_t out_size = 0;
};

std::vector<ExampleAbstraction> abstract_examples(const Schema& s, const std::vector<Example>& examples) {
  std::vector<ExampleAbstraction> out;
  for (const auto& ex : examples) {
    ExampleAbstraction ea;
    ea.adb = abstract_db_of(ex.input, s);
    ea.out_size = ex.output.size();
    if (ex.output.empty()) {
      ea.out_type = DocumentType{};
    } else {
      try {
        ea.out_type = infer_collection_type(ex.output);
      } catch (const Error&) {
      }
    }
    out.push_back(std::move(ea));
  }
  return out;
}

bool admits(const ExampleAbstraction& ea, const std::vector<AbstractCollection>& lambda, const SynthesisConfig& cfg) {
  if (!ea.out_type) return true;  // nothing to check against; never prune
  for (const auto& ac : lambda) {
    bool size_ok = cfg.disable_size_abstraction ||
                   is_sat(ac.formula, SizeProbe{ac.result_var, static_cast<std::int64_t>(ea.out_size)});
    bool type_ok = cfg.disable_type_abstraction || ea.out_size == 0 || matches(*ea.out_type, ac.type);
    if (size_ok && type_ok) return true;
  }
  return false;
}

bool deduce_with(const std::vector<ExampleAbstraction>& eas, const Sketch& sk, const SynthesisConfig& cfg) {
  if (cfg.disable_size_abstraction && cfg.disable_type_abstraction) return true;
  AbsEvalOptions opts{cfg.max_group_keys};
  for (const auto& ea : eas) {
    auto lambda = abs_eval(ea.adb, ea.out_type.value_or(DocumentType{}), sk, opts);
    if (spdlog::should_log(spdlog::level::trace)) spdlog::trace("  {} -> {}", to_string(sk), lambda_text(lambda));
    if (!admits(ea, lambda, cfg)) return false;
  }
  return true;
}

constexpr CmpOp kCmpOrder[] = {CmpOp::Gt, CmpOp::Ge, CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ne};
constexpr ArithOp kArithOrder[] = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div, ArithOp::Mod};
constexpr AggKind kAggOrder[] = {AggKind::Sum, AggKind::Avg, AggKind::Min, AggKind::Max};

// Non-empty subsets, larger first, lexicographic by index within a size.
template <class T>
std::vector<std::vector<T>> subsets_desc(const std::vector<T>& xs, std::size_t max_size, std::size_t min_size = 1) {
  std::vector<std::vector<T>> out;
  std::size_t top = std::min(max_size, xs.size());
  for (std::size_t k = top; k >= min_size && k > 0; --k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<T> pick;
      for (auto i : idx) pick.push_back(xs[i]);
      out.push_back(std::move(pick));
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == xs.size() - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  if (min_size == 0) out.emplace_back();
  return out;
}

/// Depth-first, innermost-first argument enumeration over concrete
/// intermediate collections.
class Completer {
 public:
  Completer(const Schema& s, const Sketch& sk, const std::vector<Example>& examples, const SynthesisConfig& cfg,
            const CompletionOptions& opts)
      : schema_(s), sk_(sk), examples_(examples), cfg_(cfg), opts_(opts) {
    std::vector<Collection> outs;
    for (const auto& ex : examples) outs.push_back(ex.output);
    out_type_ = union_type(outs);
    pool_ = constant_pool(opts.constants, examples);
    later_group_.assign(sk.ops.size() + 1, false);
    for (std::size_t i = sk.ops.size(); i-- > 0;)
      later_group_[i] = later_group_[i + 1] || (i + 1 < sk.ops.size() && sk.ops[i + 1] == OpKind::Group);
    if (!opts.exhaustive) eas_ = abstract_examples(s, examples);
    if (!examples.empty()) {
      std::vector<Value> prims;
      for (const auto& d : examples.front().output) collect_primitives(Value(d), prims);
      for (const auto& v : prims)
        if (v.is_num()) first_output_numbers_.insert(v.as_num());
    }
  }

  std::optional<Query> run() {
    Node root;
    for (const auto& ex : examples_) root.cur.push_back(ex.input.at(sk_.collection));
    root.seen = present_names(root.cur);
    for (const auto& [k, v] : schema_.doc_type(sk_.collection)) root.seen.insert(k);
    Query q(sk_.collection);
    if (dfs(0, root, q)) return q;
    return std::nullopt;
  }

 private:
  struct Node {
    std::vector<Collection> cur;        // per example
    std::set<std::string> generated;    // attributes created by the pipeline so far
    std::set<std::string> seen;         // attribute names met since the last Group
  };

  void check_deadline() const {
    if (opts_.deadline && Clock::now() > *opts_.deadline) throw DeadlineExceeded();
  }

  bool dfs(std::size_t i, const Node& node, Query& q) {
    check_deadline();
    if (i == sk_.ops.size()) {
      if (opts_.programs_completed) ++*opts_.programs_completed;
      for (std::size_t e = 0; e < examples_.size(); ++e)
        if (!same_collection(node.cur[e], examples_[e].output)) return false;
      return true;
    }
    std::unordered_set<std::string> tried;
    bool found = false;
    auto visit = [&](Stage st, std::vector<Collection> results, Node next) -> bool {
      check_deadline();
      std::string key;
      for (const auto& g : next.generated) key += g + ",";
      key += '|';
      for (const auto& r : results) key += collection_key(r) + '\x1e';
      if (!tried.insert(key).second) return false;
      next.cur = std::move(results);
      for (const auto& n : present_names(next.cur)) next.seen.insert(n);
      if (!opts_.exhaustive && i + 1 < sk_.ops.size() && !suffix_feasible(i + 1, next)) return false;
      q.stages.push_back(std::move(st));
      if (dfs(i + 1, next, q)) return true;
      q.stages.pop_back();
      return false;
    };
    switch (sk_.ops[i]) {
      case OpKind::Project: found = project(i, node, visit); break;
      case OpKind::Match: found = match(node, visit); break;
      case OpKind::AddFields: found = add_fields(i, node, visit); break;
      case OpKind::Unwind: found = unwind(node, visit); break;
      case OpKind::Group: found = group(i, node, visit); break;
      case OpKind::Lookup: found = lookup(node, visit); break;
    }
    return found;
  }

  template <class Visit>
  bool try_stage(const Node& node, Stage st, Node next, Visit& visit,
                 const std::function<bool(const Collection&, const Collection&)>& keep = {}) {
    std::vector<Collection> results;
    results.reserve(node.cur.size());
    for (std::size_t e = 0; e < node.cur.size(); ++e) {
      try {
        results.push_back(eval_stage(examples_[e].input, node.cur[e], st));
      } catch (const Error&) {
        return false;
      }
      if (keep && !keep(node.cur[e], results.back())) return false;
    }
    return visit(std::move(st), std::move(results), std::move(next));
  }

  // Abstract check of the remaining operators from a concrete intermediate.
  bool suffix_feasible(std::size_t i, const Node& node) {
    if (cfg_.disable_size_abstraction && cfg_.disable_type_abstraction) return true;
    std::vector<OpKind> rest(sk_.ops.begin() + static_cast<std::ptrdiff_t>(i), sk_.ops.end());
    for (std::size_t e = 0; e < examples_.size(); ++e) {
      const Collection& c = node.cur[e];
      DocumentType t = c.empty() ? DocumentType{} : infer_collection_type(c, lenient());
      AugmentedType start;
      bool has_generated = false;
      for (const auto& [k, v] : t) {
        if (node.generated.count(k)) has_generated = true;
        else start.set(k, Slot::of(v));
      }
      if (has_generated) start.set(Placeholder{Placeholder::Arity::Plus, 0}, Slot::any());
      std::string key = std::to_string(e) + "|" + std::to_string(i) + "|" + std::to_string(c.size()) + "|" +
                        start.canonical();
      auto hit = suffix_cache_.find(key);
      if (hit != suffix_cache_.end()) {
        if (!hit->second) return false;
        continue;
      }
      AbstractCollection ac{start, SizeFormula::grounded(static_cast<std::int64_t>(c.size())), 0};
      const auto& ea = eas_[e];
      auto lambda = abs_eval_from(ea.adb, ea.out_type.value_or(DocumentType{}), ac, rest, {cfg_.max_group_keys});
      bool ok = admits(ea, lambda, cfg_);
      suffix_cache_.emplace(std::move(key), ok);
      if (!ok) return false;
    }
    return true;
  }

  std::vector<const Document*> all_docs(const Node& node) const {
    std::vector<const Document*> docs;
    for (const auto& c : node.cur)
      for (const auto& d : c) docs.push_back(&d);
    return docs;
  }

  // ---- Project: attributes common to the stage input and the output, plus
  // every generated attribute.
  static void common_paths(const DocumentType& in, const DocumentType& out, const AccessPath* prefix,
                           std::vector<AccessPath>& acc) {
    for (const auto& [k, t] : in) {
      const ValueType* u = out.find(k);
      if (!u) continue;
      AccessPath h = prefix ? prefix->child(k) : AccessPath({k});
      if (t == *u) acc.push_back(h);
      else if (t.is_doc() && u->is_doc()) common_paths(t.fields(), u->fields(), &h, acc);
    }
  }

  template <class Visit>
  bool project(std::size_t, const Node& node, Visit& visit) {
    DocumentType in = union_type(node.cur);
    DocumentType plain;
    for (const auto& [k, v] : in)
      if (!node.generated.count(k)) plain.set(k, v);
    std::vector<AccessPath> common;
    common_paths(plain, out_type_, nullptr, common);
    std::vector<AccessPath> gen;
    for (const auto& g : node.generated) gen.push_back(AccessPath({g}));

    std::vector<std::vector<AccessPath>> choices;
    if (opts_.exhaustive) {
      choices = subsets_desc(common, common.size(), gen.empty() ? 1 : 0);
    } else if (!common.empty() || !gen.empty()) {
      choices.push_back(common);
    }
    for (auto& paths : choices) {
      paths.insert(paths.end(), gen.begin(), gen.end());
      if (paths.empty()) continue;
      std::sort(paths.begin(), paths.end());
      if (try_stage(node, ProjectStage{paths}, node, visit)) return true;
    }
    return false;
  }

  // ---- Match
  template <class Visit>
  bool match(const Node& node, Visit& visit) {
    auto docs = all_docs(node);
    std::vector<AccessPath> paths;
    for (const auto& tp : typed_paths(union_type(node.cur))) paths.push_back(tp.path);
    for (auto& p : enumerate_predicates(docs, paths, pool_, cfg_))
      if (try_stage(node, MatchStage{std::move(p)}, node, visit)) return true;
    return false;
  }

  // ---- AddFields
  std::vector<Expr> expressions(const std::vector<TypedPath>& paths, const std::optional<ValueType>& want) const {
    std::vector<Expr> out;
    std::vector<AccessPath> nums;
    for (const auto& tp : paths)
      if (tp.type.kind() == ValueType::Kind::Num) nums.push_back(tp.path);
    for (const auto& tp : paths)
      if (!want || tp.type == *want) out.push_back(Expr::path(tp.path));
    if (!want || want->kind() == ValueType::Kind::Num) {
      for (MathFn f : cfg_.math_fns)
        for (const auto& p : nums) out.push_back(Expr::call(f, p));
      for (ArithOp op : kArithOrder)
        for (const auto& a : nums)
          for (const auto& b : nums) out.push_back(Expr::arith(a, op, b));
    }
    return out;
  }

  template <class Visit>
  bool add_fields(std::size_t i, const Node& node, Visit& visit) {
    DocumentType in = union_type(node.cur);
    auto present = present_names(node.cur);
    auto paths = typed_paths(in);

    // Before a Group only aggregate inputs matter (generated attributes are
    // never keys), so a single scratch attribute stands in for output names.
    std::vector<std::string> targets;
    std::string scratch = "v" + std::to_string(i);
    if (later_group_[i]) {
      if (!present.count(scratch) && !node.seen.count(scratch)) targets.push_back(scratch);
    } else {
      for (const auto& [k, t] : out_type_)
        if (!present.count(k) && !node.seen.count(k)) targets.push_back(k);
    }
    if (targets.empty()) return false;

    // Surviving expressions per target: non-null everywhere, the target's
    // type, one per distinct value vector.
    std::map<std::string, std::vector<Expr>> options;
    for (const auto& name : targets) {
      std::optional<ValueType> want;
      if (const ValueType* t = out_type_.find(name)) want = *t;
      else want = ValueType::num();
      std::unordered_set<std::string> seen_vals;
      for (auto& ex : expressions(paths, want)) {
        std::vector<Value> vals;
        bool ok = true;
        for (const auto& c : node.cur)
          for (const auto& d : c) {
            Value v = eval_expr(d, ex);
            if (v.is_null()) ok = false;
            vals.push_back(std::move(v));
          }
        if (!ok) continue;
        bool typed = true;
        for (const auto& v : vals) {
          try {
            typed = typed && infer_value_type(v) == *want;
          } catch (const Error&) {
            typed = false;
          }
        }
        if (!typed) continue;
        if (!seen_vals.insert(values_key(vals)).second) continue;
        if (!opts_.exhaustive && !later_group_[i] && out_type_.find(name) && !values_cover(node, ex, name)) continue;
        options[name].push_back(std::move(ex));
      }
    }

    for (const auto& subset : subsets_desc(targets, targets.size())) {
      bool viable = std::all_of(subset.begin(), subset.end(), [&](const std::string& n) { return !options[n].empty(); });
      if (!viable) continue;
      std::vector<std::size_t> idx(subset.size(), 0);
      while (true) {
        AddFieldsStage st;
        for (std::size_t j = 0; j < subset.size(); ++j) {
          st.paths.push_back(AccessPath({subset[j]}));
          st.exprs.push_back(options[subset[j]][idx[j]]);
        }
        Node next = node;
        for (const auto& n : subset) next.generated.insert(n);
        if (try_stage(node, std::move(st), std::move(next), visit)) return true;
        std::size_t j = subset.size();
        while (j > 0 && ++idx[j - 1] == options[subset[j - 1]].size()) idx[--j] = 0;
        if (j == 0) break;
      }
    }
    return false;
  }

  // Every output value of `name` must already be produced here (the attribute
  // is never changed again when no Group follows).
  bool values_cover(const Node& node, const Expr& ex, const std::string& name) const {
    for (std::size_t e = 0; e < examples_.size(); ++e) {
      std::unordered_set<std::string> have;
      for (const auto& d : node.cur[e]) have.insert(canonical_string(eval_expr(d, ex)));
      for (const auto& d : examples_[e].output) {
        const Value* v = d.find(name);
        if (!v || !have.count(canonical_string(*v))) return false;
      }
    }
    return true;
  }

  // ---- Unwind
  template <class Visit>
  bool unwind(const Node& node, Visit& visit) {
    DocumentType in = union_type(node.cur);
    DocumentType plain;
    for (const auto& [k, v] : in)
      if (!node.generated.count(k)) plain.set(k, v);
    auto grows = [](const Collection& before, const Collection& after) { return after.size() >= before.size(); };
    for (const auto& h : unwindable_paths(plain))
      if (try_stage(node, UnwindStage{h}, node, visit, grows)) return true;
    return false;
  }

  // ---- Group
  template <class Visit>
  bool group(std::size_t i, const Node& node, Visit& visit) {
    DocumentType in = union_type(node.cur);
    std::vector<AccessPath> keys;
    for (const auto& [k, v] : in)
      if (!node.generated.count(k)) keys.push_back(AccessPath({k}));
    // Accumulators read top-level numeric attributes only; nested paths made
    // the forum example ambiguous (Max over reply depth happens to
    // equal the reply count there).
    std::vector<AccessPath> nums;
    for (const auto& [k, v] : in)
      if (v.kind() == ValueType::Kind::Num) nums.push_back(AccessPath({k}));

    std::vector<std::string> names;
    for (const auto& [k, t] : out_type_)
      if (k != "_id" && t.kind() == ValueType::Kind::Num) names.push_back(k);
    if (later_group_[i]) names.push_back("g" + std::to_string(i));

    std::vector<Agg> aggs{Agg::count()};
    for (const auto& p : nums)
      for (AggKind k : kAggOrder) aggs.push_back(Agg::of(k, p));

    auto shrinks = [](const Collection& before, const Collection& after) {
      return !before.empty() && after.size() < before.size();
    };
    bool prune_values = !opts_.exhaustive && !later_group_[i];

    for (const auto& ks : subsets_desc(keys, static_cast<std::size_t>(cfg_.max_group_keys))) {
      // Aggregates that survive value-based pruning, deduplicated by values.
      std::map<std::string, std::vector<Agg>> options;
      for (const auto& name : names) {
        std::unordered_set<std::string> seen_vals;
        for (const auto& a : aggs) {
          std::vector<Value> vals;
          std::vector<std::vector<Value>> per_example;
          bool ok = true;
          for (std::size_t e = 0; e < node.cur.size() && ok; ++e) {
            Collection g;
            try {
              g = eval_stage(examples_[e].input, node.cur[e], GroupStage{ks, {name}, {a}});
            } catch (const Error&) {
              ok = false;
              break;
            }
            per_example.emplace_back();
            for (const auto& d : g) {
              const Value* v = d.find(name);
              per_example.back().push_back(v ? *v : Value());
              vals.push_back(per_example.back().back());
            }
          }
          if (!ok || !seen_vals.insert(values_key(vals)).second) continue;
          if (prune_values && !agg_plausible(name, per_example)) continue;
          options[name].push_back(a);
        }
      }

      for (const auto& chosen : subsets_desc(names, names.size(), 0)) {
        bool viable = std::all_of(chosen.begin(), chosen.end(), [&](const std::string& n) { return !options[n].empty(); });
        if (!viable) continue;
        std::vector<std::size_t> idx(chosen.size(), 0);
        while (true) {
          GroupStage st;
          st.keys = ks;
          for (std::size_t j = 0; j < chosen.size(); ++j) {
            st.names.push_back(chosen[j]);
            st.aggs.push_back(options[chosen[j]][idx[j]]);
          }
          Node next = node;
          next.generated = std::set<std::string>(chosen.begin(), chosen.end());
          next.seen.clear();
          if (try_stage(node, std::move(st), std::move(next), visit, shrinks)) return true;
          std::size_t j = chosen.size();
          while (j > 0 && ++idx[j - 1] == options[chosen[j - 1]].size()) idx[--j] = 0;
          if (j == 0) break;
        }
      }
    }
    return false;
  }

  // Some group value of the first example appears among its output numbers;
  // with the name in the output, every output value must be produced.
  bool agg_plausible(const std::string& name, const std::vector<std::vector<Value>>& per_example) const {
    if (!examples_.front().output.empty()) {
      bool any = false;
      for (const auto& v : per_example.front()) any = any || (v.is_num() && first_output_numbers_.count(v.as_num()));
      if (!any) return false;
    }
    if (!out_type_.find(name)) return true;
    for (std::size_t e = 0; e < examples_.size(); ++e) {
      std::unordered_set<std::string> have;
      for (const auto& v : per_example[e]) have.insert(canonical_string(v));
      for (const auto& d : examples_[e].output) {
        const Value* v = d.find(name);
        if (!v || !have.count(canonical_string(*v))) return false;
      }
    }
    return true;
  }

  // ---- Lookup
  template <class Visit>
  bool lookup(const Node& node, Visit& visit) {
    DocumentType in = union_type(node.cur);
    auto present = present_names(node.cur);
    std::vector<std::string> targets;
    for (const auto& [k, t] : out_type_)
      if (t.is_array() && t.elem().is_doc() && !present.count(k) && !node.seen.count(k)) targets.push_back(k);
    if (targets.empty()) return false;
    auto local = typed_paths(in);

    for (const auto& [from, ft] : schema_.map()) {
      auto foreign = typed_paths(ft.elem().fields());
      for (const auto& l : local) {
        if (!l.type.is_primitive()) continue;
        for (const auto& f : foreign) {
          if (!(f.type == l.type)) continue;
          for (const auto& as : targets) {
            Node next = node;
            next.generated.insert(as);
            auto nonempty = [&as](const Collection& before, const Collection& after) {
              if (before.empty()) return true;
              for (const auto& d : after) {
                const Value* v = d.find(as);
                if (v && v->is_array() && !v->as_array().empty()) return true;
              }
              return false;
            };
            if (try_stage(node, LookupStage{l.path, f.path, from, as}, std::move(next), visit, nonempty)) return true;
          }
        }
      }
    }
    return false;
  }

  const Schema& schema_;
  const Sketch& sk_;
  const std::vector<Example>& examples_;
  const SynthesisConfig& cfg_;
  const CompletionOptions& opts_;
  DocumentType out_type_;
  std::vector<Value> pool_;
  std::vector<bool> later_group_;
  std::vector<ExampleAbstraction> eas_;
  std::set<double> first_output_numbers_;
  std::unordered_map<std::string, bool> suffix_cache_;
};

}  // namespace

std::string_view to_string(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Solved: return "solved";
    case SynthesisStatus::Timeout: return "timeout";
    case SynthesisStatus::Exhausted: return "exhausted";
  }
  return "?";
}

void validate_task(const SynthesisTask& task, const SynthesisConfig& cfg) {
  if (task.examples.empty()) throw InputError("/examples", "at least one example is required");
  if (!task.schema.find(task.collection)) throw InputError("/collection", "collection not in schema: " + task.collection);
  if (cfg.max_pipeline_depth < 1 || cfg.max_group_keys < 1 || cfg.max_predicate_atoms < 1 || cfg.timeout_seconds <= 0)
    throw InputError("", "configuration bounds must be at least 1");
  for (std::size_t i = 0; i < task.examples.size(); ++i) {
    const auto& ex = task.examples[i];
    std::string where = "/examples/" + std::to_string(i);
    std::string why;
    if (!fits(ex.input, task.schema, &why)) throw InputError(where + "/input", why);
    if (!ex.input.count(task.collection)) throw InputError(where + "/input", "missing collection " + task.collection);
    for (const auto& [name, t] : task.schema.map())
      if (!ex.input.count(name)) throw InputError(where + "/input", "missing collection " + name);
    if (!ex.output.empty()) {
      try {
        infer_collection_type(ex.output);
      } catch (const Error& e) {
        throw InputError(where + "/output", e.what());
      }
    }
  }
}

std::vector<Sketch> refine(const Sketch& sk) {
  std::vector<Sketch> out;
  out.reserve(kAllOps.size());
  for (OpKind op : kAllOps) {
    Sketch r{sk.collection, {op}};
    r.ops.insert(r.ops.end(), sk.ops.begin(), sk.ops.end());
    out.push_back(std::move(r));
  }
  return out;
}

bool deduce(const Schema& s, const Sketch& sk, const std::vector<Example>& examples, const SynthesisConfig& cfg) {
  return deduce_with(abstract_examples(s, examples), sk, cfg);
}

std::optional<Query> complete_sketch(const Schema& s, const Sketch& sk, const std::vector<Example>& examples,
                                     const SynthesisConfig& cfg, const CompletionOptions& opts) {
  for (const auto& ex : examples)
    if (!ex.input.count(sk.collection)) return std::nullopt;
  return Completer(s, sk, examples, cfg, opts).run();
}

std::vector<Pred> enumerate_predicates(const std::vector<const Document*>& docs, const std::vector<AccessPath>& paths,
                                       const std::vector<Value>& constants, const SynthesisConfig& cfg) {
  struct Cand {
    Pred pred;
    std::string truth;
  };
  std::unordered_set<std::string> seen;
  auto truth_of = [&](const Pred& p) {
    std::string tv(docs.size(), '0');
    for (std::size_t i = 0; i < docs.size(); ++i)
      if (eval_pred(*docs[i], p)) tv[i] = '1';
    return tv;
  };
  auto offer = [&](std::vector<Cand>& tier, Pred p, std::string tv) {
    if (seen.insert(tv).second) tier.push_back({std::move(p), std::move(tv)});
  };

  std::vector<Cand> atoms;
  offer(atoms, Pred::truth(), std::string(docs.size(), '1'));
  offer(atoms, Pred::falsity(), std::string(docs.size(), '0'));
  std::size_t first_real = atoms.size();
  for (const auto& c : constants)
    for (const auto& h : paths)
      for (CmpOp op : kCmpOrder) {
        Pred p = Pred::cmp(h, op, c);
        auto tv = truth_of(p);
        offer(atoms, std::move(p), std::move(tv));
      }
  for (const auto& c : constants) {
    if (!c.is_num() || c.as_num() < 0 || c.as_num() != static_cast<double>(static_cast<long long>(c.as_num())))
      continue;
    for (const auto& h : paths) {
      Pred p = Pred::size_eq(h, c.as_num());
      auto tv = truth_of(p);
      offer(atoms, std::move(p), std::move(tv));
    }
  }
  for (const auto& h : paths) {
    Pred p = Pred::exists(h);
    auto tv = truth_of(p);
    offer(atoms, std::move(p), std::move(tv));
  }

  std::vector<Pred> out;
  for (const auto& a : atoms) out.push_back(a.pred);
  if (cfg.max_predicate_atoms < 1) return out;

  // by_count[k]: distinct formulas over exactly k atoms (True/False excluded).
  std::vector<std::vector<Cand>> by_count(static_cast<std::size_t>(cfg.max_predicate_atoms) + 1);
  by_count[1].assign(atoms.begin() + static_cast<std::ptrdiff_t>(first_real), atoms.end());
  std::vector<Cand> negs;
  for (std::size_t i = first_real; i < atoms.size(); ++i) {
    std::string tv = atoms[i].truth;
    for (auto& ch : tv) ch = ch == '1' ? '0' : '1';
    offer(negs, Pred::negate(atoms[i].pred), std::move(tv));
  }
  for (const auto& n : negs) out.push_back(n.pred);
  by_count[1].insert(by_count[1].end(), negs.begin(), negs.end());

  for (std::size_t k = 2; k < by_count.size(); ++k) {
    for (std::size_t i = 1; i <= k / 2; ++i) {
      const auto& left = by_count[i];
      const auto& right = by_count[k - i];
      for (std::size_t a = 0; a < left.size(); ++a) {
        for (std::size_t b = (i == k - i ? a + 1 : 0); b < right.size(); ++b) {
          std::string both(docs.size(), '0'), either(docs.size(), '0');
          for (std::size_t d = 0; d < docs.size(); ++d) {
            bool x = left[a].truth[d] == '1', y = right[b].truth[d] == '1';
            both[d] = x && y ? '1' : '0';
            either[d] = x || y ? '1' : '0';
          }
          offer(by_count[k], Pred::conj(left[a].pred, right[b].pred), std::move(both));
          offer(by_count[k], Pred::disj(left[a].pred, right[b].pred), std::move(either));
        }
      }
    }
    for (const auto& c : by_count[k]) out.push_back(c.pred);
  }
  return out;
}

SynthesisResult synthesize(const SynthesisTask& task, const SynthesisConfig& cfg) {
  validate_task(task, cfg);
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_seconds));
  SynthesisResult result;
  auto finish = [&](SynthesisStatus st) {
    result.status = st;
    result.stats.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (result.query) result.stats.ast_size = ast_size(*result.query);
    return result;
  };

  const auto eas = abstract_examples(task.schema, task.examples);
  CompletionOptions copts;
  copts.constants = task.constants;
  copts.deadline = deadline;
  copts.programs_completed = &result.stats.programs_completed;

  std::deque<Sketch> work{Sketch{task.collection, {}}};
  while (!work.empty()) {
    if (Clock::now() > deadline) return finish(SynthesisStatus::Timeout);
    Sketch sk = std::move(work.front());
    work.pop_front();
    ++result.stats.sketches_explored;
    bool feasible = deduce_with(eas, sk, cfg);
    spdlog::debug("sketch {} {}", to_string(sk), feasible ? "feasible" : "pruned");
    if (feasible) {
      try {
        if (auto q = complete_sketch(task.schema, sk, task.examples, cfg, copts)) {
          for (const auto& ex : task.examples)
            if (!same_collection(eval_query(ex.input, *q), ex.output))
              throw Error("internal: completion does not reproduce an example");
          result.query = std::move(q);
          spdlog::debug("solved: {}", pretty_print(*result.query));
          return finish(SynthesisStatus::Solved);
        }
      } catch (const DeadlineExceeded&) {
        return finish(SynthesisStatus::Timeout);
      }
    }
    if (static_cast<int>(sk.depth()) < cfg.max_pipeline_depth)
      for (auto& r : refine(sk)) work.push_back(std::move(r));
  }
  return finish(SynthesisStatus::Exhausted);
}

}  // namespace docsynth
