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

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "docsynth/access_path.hpp"
#include "docsynth/json_io.hpp"
#include "docsynth/value.hpp"

namespace docsynth {

enum class CmpOp { Le, Lt, Eq, Ne, Gt, Ge };
enum class ArithOp { Add, Sub, Mul, Div, Mod };
enum class MathFn { Abs, Floor, Ceil };
enum class AggKind { Sum, Avg, Min, Max, Count };

std::string_view to_string(CmpOp op);
std::string_view to_string(ArithOp op);
std::string_view to_string(MathFn fn);
std::string_view to_string(AggKind k);

/// Predicate tree. Children are shared and immutable.
class Pred {
 public:
  enum class Kind { True, False, Cmp, SizeEq, Exists, And, Or, Not };

  static Pred truth() { return Pred(Kind::True); }
  static Pred falsity() { return Pred(Kind::False); }
  static Pred cmp(AccessPath h, CmpOp op, Value c);
  static Pred size_eq(AccessPath h, double n);
  static Pred exists(AccessPath h);
  static Pred conj(Pred a, Pred b);
  static Pred disj(Pred a, Pred b);
  static Pred negate(Pred a);

  Kind kind() const { return kind_; }
  const AccessPath& path() const { return path_; }
  CmpOp op() const { return op_; }
  const Value& constant() const { return constant_; }
  const Pred& lhs() const { return *lhs_; }
  const Pred& rhs() const { return *rhs_; }
  bool is_atom() const { return kind_ != Kind::And && kind_ != Kind::Or && kind_ != Kind::Not; }
  /// Number of atoms (True/False/comparisons) in the tree.
  int atom_count() const;

  friend bool operator==(const Pred& a, const Pred& b);

 private:
  explicit Pred(Kind k) : kind_(k) {}
  Kind kind_;
  AccessPath path_;
  CmpOp op_ = CmpOp::Eq;
  Value constant_;
  std::shared_ptr<const Pred> lhs_, rhs_;
};

struct Expr {
  enum class Kind { Path, Arith, Fn };
  Kind kind = Kind::Path;
  AccessPath lhs;
  ArithOp aop = ArithOp::Add;
  AccessPath rhs;  // Arith only
  MathFn fn = MathFn::Abs;

  static Expr path(AccessPath h) {
    Expr e;
    e.lhs = std::move(h);
    return e;
  }
  static Expr arith(AccessPath a, ArithOp op, AccessPath b) {
    Expr e;
    e.kind = Kind::Arith;
    e.lhs = std::move(a);
    e.aop = op;
    e.rhs = std::move(b);
    return e;
  }
  static Expr call(MathFn f, AccessPath h) {
    Expr e;
    e.kind = Kind::Fn;
    e.lhs = std::move(h);
    e.fn = f;
    return e;
  }
  friend bool operator==(const Expr& a, const Expr& b);
};

struct Agg {
  AggKind kind = AggKind::Count;
  std::optional<AccessPath> path;  // empty for Count

  static Agg count() { return Agg{}; }
  static Agg of(AggKind k, AccessPath h) { return Agg{k, std::move(h)}; }
  friend bool operator==(const Agg&, const Agg&) = default;
};

enum class OpKind { Project, Match, AddFields, Unwind, Group, Lookup };
inline constexpr std::array<OpKind, 6> kAllOps = {OpKind::Project, OpKind::Match, OpKind::AddFields,
                                                  OpKind::Unwind, OpKind::Group, OpKind::Lookup};
std::string_view to_string(OpKind k);

struct ProjectStage {
  std::vector<AccessPath> paths;
  friend bool operator==(const ProjectStage&, const ProjectStage&) = default;
};
struct MatchStage {
  Pred pred = Pred::truth();
  friend bool operator==(const MatchStage&, const MatchStage&) = default;
};
struct AddFieldsStage {
  std::vector<AccessPath> paths;
  std::vector<Expr> exprs;
  friend bool operator==(const AddFieldsStage&, const AddFieldsStage&) = default;
};
struct UnwindStage {
  AccessPath path;
  friend bool operator==(const UnwindStage&, const UnwindStage&) = default;
};
struct GroupStage {
  std::vector<AccessPath> keys;
  std::vector<std::string> names;
  std::vector<Agg> aggs;
  friend bool operator==(const GroupStage&, const GroupStage&) = default;
};
struct LookupStage {
  AccessPath local;
  AccessPath foreign;
  std::string from;
  std::string as;
  friend bool operator==(const LookupStage&, const LookupStage&) = default;
};

/// Variant index order equals OpKind order.
using Stage = std::variant<ProjectStage, MatchStage, AddFieldsStage, UnwindStage, GroupStage, LookupStage>;

inline OpKind op_of(const Stage& s) { return static_cast<OpKind>(s.index()); }

/// A linear pipeline over one source collection; `stages[0]` is innermost.
struct Query {
  std::string collection;
  std::vector<Stage> stages;

  Query() = default;
  explicit Query(std::string coll, std::vector<Stage> st = {})
      : collection(std::move(coll)), stages(std::move(st)) {}

  /// Appends an outer stage.
  Query then(Stage s) const;
  friend bool operator==(const Query&, const Query&) = default;
};

/// Throws Error on arity violations (AddFields/Group name-value lists, empty
/// Project or Group key lists).
void check_well_formed(const Query& q);

/// Operator spine with every argument left as a hole.
struct Sketch {
  std::string collection;
  std::vector<OpKind> ops;  // innermost first

  std::size_t depth() const { return ops.size(); }
  friend bool operator==(const Sketch&, const Sketch&) = default;
};

Sketch skeleton(const Query& q);
std::string to_string(const Sketch& sk);

std::string to_string(const Pred& p);
std::string to_string(const Expr& e);
std::string to_string(const Agg& a);
std::string to_string(const Stage& s, const std::string& inner);
/// Algebraic notation, e.g. `Match(Unwind(posts, replies), replies.depth > 0)`.
std::string pretty_print(const Query& q);
/// Renders a path, backtick-quoting segments that are not plain identifiers.
std::string path_text(const AccessPath& h);
std::string constant_text(const Value& v);

Query parse_query(std::string_view text);
Pred parse_pred(std::string_view text);

/// Node count: every operator, predicate/expression/aggregate constructor,
/// collection name, path, attribute name and constant counts one.
std::size_t ast_size(const Query& q);
std::size_t ast_size(const Pred& p);
std::array<std::size_t, 6> op_counts(const Query& q);

Json query_to_json(const Query& q);
Query query_from_json(const Json& j, const std::string& where = "");

}  // namespace docsynth
