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

#include "docsynth/query.hpp"

#include <cctype>
#include <charconv>

#include "docsynth/error.hpp"

namespace docsynth {

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    case ArithOp::Mod: return "%";
  }
  return "?";
}

std::string_view to_string(MathFn fn) {
  switch (fn) {
    case MathFn::Abs: return "abs";
    case MathFn::Floor: return "floor";
    case MathFn::Ceil: return "ceil";
  }
  return "?";
}

std::string_view to_string(AggKind k) {
  switch (k) {
    case AggKind::Sum: return "Sum";
    case AggKind::Avg: return "Avg";
    case AggKind::Min: return "Min";
    case AggKind::Max: return "Max";
    case AggKind::Count: return "Count";
  }
  return "?";
}

std::string_view to_string(OpKind k) {
  switch (k) {
    case OpKind::Project: return "Project";
    case OpKind::Match: return "Match";
    case OpKind::AddFields: return "AddFields";
    case OpKind::Unwind: return "Unwind";
    case OpKind::Group: return "Group";
    case OpKind::Lookup: return "Lookup";
  }
  return "?";
}

// --- Pred ------------------------------------------------------------------

Pred Pred::cmp(AccessPath h, CmpOp op, Value c) {
  Pred p(Kind::Cmp);
  p.path_ = std::move(h);
  p.op_ = op;
  p.constant_ = std::move(c);
  return p;
}

Pred Pred::size_eq(AccessPath h, double n) {
  Pred p(Kind::SizeEq);
  p.path_ = std::move(h);
  p.constant_ = Value(n);
  return p;
}

Pred Pred::exists(AccessPath h) {
  Pred p(Kind::Exists);
  p.path_ = std::move(h);
  return p;
}

Pred Pred::conj(Pred a, Pred b) {
  Pred p(Kind::And);
  p.lhs_ = std::make_shared<const Pred>(std::move(a));
  p.rhs_ = std::make_shared<const Pred>(std::move(b));
  return p;
}

Pred Pred::disj(Pred a, Pred b) {
  Pred p(Kind::Or);
  p.lhs_ = std::make_shared<const Pred>(std::move(a));
  p.rhs_ = std::make_shared<const Pred>(std::move(b));
  return p;
}

Pred Pred::negate(Pred a) {
  Pred p(Kind::Not);
  p.lhs_ = std::make_shared<const Pred>(std::move(a));
  return p;
}

int Pred::atom_count() const {
  switch (kind_) {
    case Kind::And:
    case Kind::Or: return lhs_->atom_count() + rhs_->atom_count();
    case Kind::Not: return lhs_->atom_count();
    default: return 1;
  }
}

bool operator==(const Pred& a, const Pred& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Pred::Kind::True:
    case Pred::Kind::False: return true;
    case Pred::Kind::Cmp: return a.path_ == b.path_ && a.op_ == b.op_ && a.constant_ == b.constant_;
    case Pred::Kind::SizeEq: return a.path_ == b.path_ && a.constant_ == b.constant_;
    case Pred::Kind::Exists: return a.path_ == b.path_;
    case Pred::Kind::And:
    case Pred::Kind::Or: return *a.lhs_ == *b.lhs_ && *a.rhs_ == *b.rhs_;
    case Pred::Kind::Not: return *a.lhs_ == *b.lhs_;
  }
  return false;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.lhs != b.lhs) return false;
  if (a.kind == Expr::Kind::Arith) return a.aop == b.aop && a.rhs == b.rhs;
  if (a.kind == Expr::Kind::Fn) return a.fn == b.fn;
  return true;
}

Query Query::then(Stage s) const {
  Query q = *this;
  q.stages.push_back(std::move(s));
  return q;
}

void check_well_formed(const Query& q) {
  if (q.collection.empty()) throw Error("query has no source collection");
  for (const auto& s : q.stages) {
    if (auto* p = std::get_if<ProjectStage>(&s); p && p->paths.empty())
      throw Error("Project needs at least one path");
    if (auto* a = std::get_if<AddFieldsStage>(&s)) {
      if (a->paths.empty()) throw Error("AddFields needs at least one attribute");
      if (a->paths.size() != a->exprs.size())
        throw Error("AddFields attribute and expression lists must have the same length");
    }
    if (auto* g = std::get_if<GroupStage>(&s)) {
      if (g->keys.empty()) throw Error("Group needs at least one key");
      if (g->names.size() != g->aggs.size())
        throw Error("Group name and aggregate lists must have the same length");
    }
  }
}

Sketch skeleton(const Query& q) {
  Sketch sk{q.collection, {}};
  for (const auto& s : q.stages) sk.ops.push_back(op_of(s));
  return sk;
}

std::string to_string(const Sketch& sk) {
  std::string out = sk.collection;
  for (OpKind op : sk.ops) {
    out = std::string(to_string(op)) + "(" + out;
    switch (op) {
      case OpKind::Group: out += ", _, _, _)"; break;
      case OpKind::Lookup: out += ", _, _, _, _)"; break;
      case OpKind::AddFields: out += ", _, _)"; break;
      default: out += ", _)"; break;
    }
  }
  return out;
}

// --- printing ----------------------------------------------------------------

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool is_ident_char(char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

std::string ident_text(const std::string& s) {
  bool plain = !s.empty() && is_ident_start(s[0]);
  for (char c : s) plain = plain && is_ident_char(c);
  if (plain) return s;
  std::string out = "`";
  for (char c : s) {
    if (c == '`') out += '`';
    out += c;
  }
  return out + "`";
}

template <class T, class F>
std::string list_text(const std::vector<T>& xs, F f) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += f(xs[i]);
  }
  return out + "]";
}

}  // namespace

std::string path_text(const AccessPath& h) {
  std::string out;
  for (std::size_t i = 0; i < h.length(); ++i) {
    if (i) out += '.';
    out += ident_text(h.segments()[i]);
  }
  return out;
}

std::string constant_text(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Str: return Json(v.as_str()).dump();
    case Value::Kind::Datetime: return "Date(" + Json(v.as_datetime().iso).dump() + ")";
    case Value::Kind::ObjectId: return "ObjectId(" + Json(v.as_object_id().hex).dump() + ")";
    default: return to_display(v);
  }
}

std::string to_string(const Pred& p) {
  switch (p.kind()) {
    case Pred::Kind::True: return "true";
    case Pred::Kind::False: return "false";
    case Pred::Kind::Cmp:
      return path_text(p.path()) + " " + std::string(to_string(p.op())) + " " + constant_text(p.constant());
    case Pred::Kind::SizeEq: return "SizeEq(" + path_text(p.path()) + ", " + constant_text(p.constant()) + ")";
    case Pred::Kind::Exists: return "Exists(" + path_text(p.path()) + ")";
    case Pred::Kind::And: return "And(" + to_string(p.lhs()) + ", " + to_string(p.rhs()) + ")";
    case Pred::Kind::Or: return "Or(" + to_string(p.lhs()) + ", " + to_string(p.rhs()) + ")";
    case Pred::Kind::Not: return "Not(" + to_string(p.lhs()) + ")";
  }
  return "?";
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Path: return path_text(e.lhs);
    case Expr::Kind::Arith: return path_text(e.lhs) + " " + std::string(to_string(e.aop)) + " " + path_text(e.rhs);
    case Expr::Kind::Fn: return std::string(to_string(e.fn)) + "(" + path_text(e.lhs) + ")";
  }
  return "?";
}

std::string to_string(const Agg& a) {
  return std::string(to_string(a.kind)) + "(" + (a.path ? path_text(*a.path) : "") + ")";
}

std::string to_string(const Stage& s, const std::string& inner) {
  auto paths = [](const std::vector<AccessPath>& hs) { return list_text(hs, path_text); };
  return std::visit(
      [&](const auto& st) -> std::string {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, ProjectStage>) {
          return "Project(" + inner + ", " + paths(st.paths) + ")";
        } else if constexpr (std::is_same_v<T, MatchStage>) {
          return "Match(" + inner + ", " + to_string(st.pred) + ")";
        } else if constexpr (std::is_same_v<T, AddFieldsStage>) {
          return "AddFields(" + inner + ", " + paths(st.paths) + ", " +
                 list_text(st.exprs, [](const Expr& e) { return to_string(e); }) + ")";
        } else if constexpr (std::is_same_v<T, UnwindStage>) {
          return "Unwind(" + inner + ", " + path_text(st.path) + ")";
        } else if constexpr (std::is_same_v<T, GroupStage>) {
          return "Group(" + inner + ", " + paths(st.keys) + ", " + list_text(st.names, ident_text) + ", " +
                 list_text(st.aggs, [](const Agg& a) { return to_string(a); }) + ")";
        } else {
          return "Lookup(" + inner + ", " + path_text(st.local) + ", " + path_text(st.foreign) + ", " +
                 ident_text(st.from) + ", " + ident_text(st.as) + ")";
        }
      },
      s);
}

std::string pretty_print(const Query& q) {
  std::string out = ident_text(q.collection);
  for (const auto& s : q.stages) out = to_string(s, out);
  return out;
}

// --- parsing -------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Query query() {
    skip();
    std::size_t start = pos_;
    std::string name = ident();
    skip();
    if (!peek('(')) return Query(name);
    OpKind op;
    if (name == "Project") op = OpKind::Project;
    else if (name == "Match") op = OpKind::Match;
    else if (name == "AddFields") op = OpKind::AddFields;
    else if (name == "Unwind") op = OpKind::Unwind;
    else if (name == "Group") op = OpKind::Group;
    else if (name == "Lookup") op = OpKind::Lookup;
    else fail(start, "unknown operator '" + name + "'");
    expect('(');
    Query q = query();
    expect(',');
    switch (op) {
      case OpKind::Project: {
        auto hs = path_list();
        if (hs.empty()) fail(start, "Project needs at least one path");
        q.stages.push_back(ProjectStage{std::move(hs)});
        break;
      }
      case OpKind::Match:
        q.stages.push_back(MatchStage{pred()});
        break;
      case OpKind::AddFields: {
        auto hs = path_list();
        expect(',');
        auto es = list([this] { return expr(); });
        if (hs.empty()) fail(start, "AddFields needs at least one attribute");
        if (hs.size() != es.size())
          fail(start, "AddFields attribute and expression lists must have the same length");
        q.stages.push_back(AddFieldsStage{std::move(hs), std::move(es)});
        break;
      }
      case OpKind::Unwind:
        q.stages.push_back(UnwindStage{path()});
        break;
      case OpKind::Group: {
        auto keys = path_list();
        expect(',');
        auto names = list([this] { return ident(); });
        expect(',');
        auto aggs = list([this] { return agg(); });
        if (keys.empty()) fail(start, "Group needs at least one key");
        if (names.size() != aggs.size()) fail(start, "Group name and aggregate lists must have the same length");
        q.stages.push_back(GroupStage{std::move(keys), std::move(names), std::move(aggs)});
        break;
      }
      case OpKind::Lookup: {
        LookupStage l;
        l.local = path();
        expect(',');
        l.foreign = path();
        expect(',');
        l.from = ident();
        expect(',');
        l.as = ident();
        q.stages.push_back(std::move(l));
        break;
      }
    }
    expect(')');
    return q;
  }

  Pred pred() {
    skip();
    std::size_t start = pos_;
    if (peek('`')) return cmp_rest(path());
    std::string word = ident();
    skip();
    if (peek('(')) {
      if (word == "SizeEq") {
        expect('(');
        AccessPath h = path();
        expect(',');
        std::size_t at = pos_;
        Value n = constant();
        if (!n.is_num()) fail(at, "SizeEq needs a numeric size");
        expect(')');
        return Pred::size_eq(std::move(h), n.as_num());
      }
      if (word == "Exists") {
        expect('(');
        AccessPath h = path();
        expect(')');
        return Pred::exists(std::move(h));
      }
      if (word == "And" || word == "Or") {
        expect('(');
        Pred a = pred();
        expect(',');
        Pred b = pred();
        expect(')');
        return word == "And" ? Pred::conj(std::move(a), std::move(b)) : Pred::disj(std::move(a), std::move(b));
      }
      if (word == "Not") {
        expect('(');
        Pred a = pred();
        expect(')');
        return Pred::negate(std::move(a));
      }
      fail(start, "unknown predicate '" + word + "'");
    }
    if (!at_cmp_op() && !peek('.')) {
      if (word == "true") return Pred::truth();
      if (word == "false") return Pred::falsity();
    }
    return cmp_rest(path_from(std::move(word)));
  }

  void end() {
    skip();
    if (pos_ != s_.size()) fail(pos_, "unexpected trailing input");
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& msg) { throw ParseError(at, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '`') {
      std::size_t start = pos_++;
      std::string out;
      while (true) {
        if (pos_ >= s_.size()) fail(start, "unterminated quoted name");
        if (s_[pos_] == '`') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '`') {
            out += '`';
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        out += s_[pos_++];
      }
      if (out.empty()) fail(start, "empty name");
      return out;
    }
    if (pos_ >= s_.size() || !is_ident_start(s_[pos_])) fail(pos_, "expected a name");
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  AccessPath path_from(std::string first) {
    std::vector<std::string> segs{std::move(first)};
    while (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      segs.push_back(ident());
    }
    return AccessPath(std::move(segs));
  }

  AccessPath path() { return path_from(ident()); }

  template <class F>
  auto list(F item) -> std::vector<decltype(item())> {
    std::vector<decltype(item())> out;
    expect('[');
    if (peek(']')) {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(item());
      if (peek(',')) {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  std::vector<AccessPath> path_list() {
    return list([this] { return path(); });
  }

  bool at_cmp_op() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '<' || c == '>' || c == '=' || (c == '!' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '=');
  }

  CmpOp cmp_op() {
    skip();
    auto two = s_.substr(pos_, 2);
    if (two == "<=") { pos_ += 2; return CmpOp::Le; }
    if (two == ">=") { pos_ += 2; return CmpOp::Ge; }
    if (two == "!=") { pos_ += 2; return CmpOp::Ne; }
    if (peek('<')) { ++pos_; return CmpOp::Lt; }
    if (peek('>')) { ++pos_; return CmpOp::Gt; }
    if (peek('=')) { ++pos_; return CmpOp::Eq; }
    fail(pos_, "expected a comparison operator");
  }

  Pred cmp_rest(AccessPath h) {
    CmpOp op = cmp_op();
    std::size_t at = pos_;
    Value c = constant();
    if (c.is_array() || c.is_doc()) fail(at, "comparison constant must be primitive or null");
    return Pred::cmp(std::move(h), op, std::move(c));
  }

  std::string json_string() {
    skip();
    std::size_t start = pos_;
    if (!peek('"')) fail(pos_, "expected a string");
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ >= s_.size()) fail(start, "unterminated string");
    ++pos_;
    try {
      return Json::parse(s_.substr(start, pos_ - start)).get<std::string>();
    } catch (const std::exception&) {
      fail(start, "invalid string literal");
    }
  }

  Value constant() {
    skip();
    if (pos_ >= s_.size()) fail(pos_, "expected a constant");
    char c = s_[pos_];
    if (c == '"') return Value(json_string());
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      if (c == '+') ++pos_;
      double d = 0;
      auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), d);
      if (res.ec != std::errc()) fail(start, "invalid number");
      pos_ = static_cast<std::size_t>(res.ptr - s_.data());
      return Value(d);
    }
    std::size_t start = pos_;
    std::string word = ident();
    if (word == "true") return Value(true);
    if (word == "false") return Value(false);
    if (word == "null") return Value();
    if (word == "Date" || word == "ObjectId") {
      expect('(');
      std::string body = json_string();
      expect(')');
      if (word == "Date") return Value(Datetime{body});
      return Value(ObjectId{body});
    }
    fail(start, "expected a constant");
  }

  Expr expr() {
    skip();
    std::size_t save = pos_;
    if (!peek('`')) {
      std::string word = ident();
      if (peek('(')) {
        MathFn fn;
        if (word == "abs") fn = MathFn::Abs;
        else if (word == "floor") fn = MathFn::Floor;
        else if (word == "ceil") fn = MathFn::Ceil;
        else fail(save, "unknown function '" + word + "'");
        expect('(');
        AccessPath h = path();
        expect(')');
        return Expr::call(fn, std::move(h));
      }
      pos_ = save;
    }
    AccessPath a = path();
    skip();
    if (pos_ < s_.size()) {
      char c = s_[pos_];
      ArithOp op;
      bool arith = true;
      switch (c) {
        case '+': op = ArithOp::Add; break;
        case '-': op = ArithOp::Sub; break;
        case '*': op = ArithOp::Mul; break;
        case '/': op = ArithOp::Div; break;
        case '%': op = ArithOp::Mod; break;
        default: arith = false;
      }
      if (arith) {
        ++pos_;
        return Expr::arith(std::move(a), op, path());
      }
    }
    return Expr::path(std::move(a));
  }

  Agg agg() {
    skip();
    std::size_t start = pos_;
    std::string word = ident();
    expect('(');
    if (word == "Count") {
      expect(')');
      return Agg::count();
    }
    AggKind k;
    if (word == "Sum") k = AggKind::Sum;
    else if (word == "Avg") k = AggKind::Avg;
    else if (word == "Min") k = AggKind::Min;
    else if (word == "Max") k = AggKind::Max;
    else fail(start, "unknown aggregate '" + word + "'");
    AccessPath h = path();
    expect(')');
    return Agg::of(k, std::move(h));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse_query(std::string_view text) {
  Parser p(text);
  Query q = p.query();
  p.end();
  return q;
}

Pred parse_pred(std::string_view text) {
  Parser p(text);
  Pred r = p.pred();
  p.end();
  return r;
}

// --- metrics -------------------------------------------------------------------

std::size_t ast_size(const Pred& p) {
  switch (p.kind()) {
    case Pred::Kind::True:
    case Pred::Kind::False: return 1;
    case Pred::Kind::Cmp:
    case Pred::Kind::SizeEq: return 3;
    case Pred::Kind::Exists: return 2;
    case Pred::Kind::And:
    case Pred::Kind::Or: return 1 + ast_size(p.lhs()) + ast_size(p.rhs());
    case Pred::Kind::Not: return 1 + ast_size(p.lhs());
  }
  return 1;
}

namespace {

std::size_t expr_size(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Path: return 1;
    case Expr::Kind::Arith: return 3;
    case Expr::Kind::Fn: return 2;
  }
  return 1;
}

}  // namespace

std::size_t ast_size(const Query& q) {
  std::size_t n = 1;
  for (const auto& s : q.stages) {
    n += 1;
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, ProjectStage>) {
            n += st.paths.size();
          } else if constexpr (std::is_same_v<T, MatchStage>) {
            n += ast_size(st.pred);
          } else if constexpr (std::is_same_v<T, AddFieldsStage>) {
            n += st.paths.size();
            for (const auto& e : st.exprs) n += expr_size(e);
          } else if constexpr (std::is_same_v<T, UnwindStage>) {
            n += 1;
          } else if constexpr (std::is_same_v<T, GroupStage>) {
            n += st.keys.size() + st.names.size();
            for (const auto& a : st.aggs) n += a.path ? 2 : 1;
          } else {
            n += 4;
          }
        },
        s);
  }
  return n;
}

std::array<std::size_t, 6> op_counts(const Query& q) {
  std::array<std::size_t, 6> c{};
  for (const auto& s : q.stages) ++c[s.index()];
  return c;
}

// --- JSON AST ------------------------------------------------------------------

namespace {

Json path_json(const AccessPath& h) { return Json(h.segments()); }

AccessPath path_of(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where, "expected a non-empty array of path segments");
  std::vector<std::string> segs;
  for (const auto& s : j) {
    if (!s.is_string()) throw InputError(where, "path segments must be strings");
    segs.push_back(s.get<std::string>());
  }
  try {
    return AccessPath(std::move(segs));
  } catch (const Error& e) {
    throw InputError(where, e.what());
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where, std::string("missing \"") + key + "\"");
  return j[key];
}

std::string str_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw InputError(where + "/" + key, "expected a string");
  return v.get<std::string>();
}

template <class E, std::size_t N>
E enum_of(const std::string& text, const std::array<E, N>& all, const std::string& where) {
  for (E e : all)
    if (to_string(e) == text) return e;
  throw InputError(where, "unknown operator '" + text + "'");
}

constexpr std::array<CmpOp, 6> kCmpOps = {CmpOp::Le, CmpOp::Lt, CmpOp::Eq, CmpOp::Ne, CmpOp::Gt, CmpOp::Ge};
constexpr std::array<ArithOp, 5> kArithOps = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div,
                                              ArithOp::Mod};
constexpr std::array<MathFn, 3> kFns = {MathFn::Abs, MathFn::Floor, MathFn::Ceil};
constexpr std::array<AggKind, 5> kAggs = {AggKind::Sum, AggKind::Avg, AggKind::Min, AggKind::Max,
                                          AggKind::Count};

Json pred_json(const Pred& p) {
  switch (p.kind()) {
    case Pred::Kind::True: return Json{{"op", "True"}};
    case Pred::Kind::False: return Json{{"op", "False"}};
    case Pred::Kind::Cmp:
      return Json{{"op", "Cmp"},
                  {"path", path_json(p.path())},
                  {"cmp", std::string(to_string(p.op()))},
                  {"value", value_to_json(p.constant())}};
    case Pred::Kind::SizeEq:
      return Json{{"op", "SizeEq"}, {"path", path_json(p.path())}, {"size", value_to_json(p.constant())}};
    case Pred::Kind::Exists: return Json{{"op", "Exists"}, {"path", path_json(p.path())}};
    case Pred::Kind::And: return Json{{"op", "And"}, {"lhs", pred_json(p.lhs())}, {"rhs", pred_json(p.rhs())}};
    case Pred::Kind::Or: return Json{{"op", "Or"}, {"lhs", pred_json(p.lhs())}, {"rhs", pred_json(p.rhs())}};
    case Pred::Kind::Not: return Json{{"op", "Not"}, {"arg", pred_json(p.lhs())}};
  }
  return nullptr;
}

Pred pred_of(const Json& j, const std::string& where) {
  std::string op = str_field(j, "op", where);
  if (op == "True") return Pred::truth();
  if (op == "False") return Pred::falsity();
  if (op == "Cmp") {
    Value c = value_from_json(field(j, "value", where), where + "/value");
    return Pred::cmp(path_of(field(j, "path", where), where + "/path"),
                     enum_of(str_field(j, "cmp", where), kCmpOps, where + "/cmp"), std::move(c));
  }
  if (op == "SizeEq") {
    const Json& n = field(j, "size", where);
    if (!n.is_number()) throw InputError(where + "/size", "expected a number");
    return Pred::size_eq(path_of(field(j, "path", where), where + "/path"), n.get<double>());
  }
  if (op == "Exists") return Pred::exists(path_of(field(j, "path", where), where + "/path"));
  if (op == "And") return Pred::conj(pred_of(field(j, "lhs", where), where + "/lhs"), pred_of(field(j, "rhs", where), where + "/rhs"));
  if (op == "Or") return Pred::disj(pred_of(field(j, "lhs", where), where + "/lhs"), pred_of(field(j, "rhs", where), where + "/rhs"));
  if (op == "Not") return Pred::negate(pred_of(field(j, "arg", where), where + "/arg"));
  throw InputError(where + "/op", "unknown predicate '" + op + "'");
}

Json expr_json(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Path: return Json{{"op", "Path"}, {"path", path_json(e.lhs)}};
    case Expr::Kind::Arith:
      return Json{{"op", "Arith"}, {"lhs", path_json(e.lhs)}, {"arith", std::string(to_string(e.aop))}, {"rhs", path_json(e.rhs)}};
    case Expr::Kind::Fn: return Json{{"op", "Fn"}, {"fn", std::string(to_string(e.fn))}, {"arg", path_json(e.lhs)}};
  }
  return nullptr;
}

Expr expr_of(const Json& j, const std::string& where) {
  std::string op = str_field(j, "op", where);
  if (op == "Path") return Expr::path(path_of(field(j, "path", where), where + "/path"));
  if (op == "Arith")
    return Expr::arith(path_of(field(j, "lhs", where), where + "/lhs"),
                       enum_of(str_field(j, "arith", where), kArithOps, where + "/arith"),
                       path_of(field(j, "rhs", where), where + "/rhs"));
  if (op == "Fn")
    return Expr::call(enum_of(str_field(j, "fn", where), kFns, where + "/fn"),
                      path_of(field(j, "arg", where), where + "/arg"));
  throw InputError(where + "/op", "unknown expression '" + op + "'");
}

Json agg_json(const Agg& a) {
  Json j{{"op", std::string(to_string(a.kind))}};
  if (a.path) j["path"] = path_json(*a.path);
  return j;
}

Agg agg_of(const Json& j, const std::string& where) {
  AggKind k = enum_of(str_field(j, "op", where), kAggs, where + "/op");
  if (k == AggKind::Count) return Agg::count();
  return Agg::of(k, path_of(field(j, "path", where), where + "/path"));
}

template <class T, class F>
Json arr(const std::vector<T>& xs, F f) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(f(x));
  return a;
}

template <class F>
auto vec_of(const Json& j, const std::string& where, F f) -> std::vector<decltype(f(j, where))> {
  if (!j.is_array()) throw InputError(where, "expected an array");
  std::vector<decltype(f(j, where))> out;
  std::size_t i = 0;
  for (const auto& e : j) {
    out.push_back(f(e, where + "/" + std::to_string(i)));
    ++i;
  }
  return out;
}

}  // namespace

Json query_to_json(const Query& q) {
  Json j{{"op", "Collection"}, {"name", q.collection}};
  for (const auto& s : q.stages) {
    Json outer{{"op", std::string(to_string(op_of(s)))}, {"inner", j}};
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, ProjectStage>) {
            outer["paths"] = arr(st.paths, path_json);
          } else if constexpr (std::is_same_v<T, MatchStage>) {
            outer["pred"] = pred_json(st.pred);
          } else if constexpr (std::is_same_v<T, AddFieldsStage>) {
            outer["paths"] = arr(st.paths, path_json);
            outer["exprs"] = arr(st.exprs, expr_json);
          } else if constexpr (std::is_same_v<T, UnwindStage>) {
            outer["path"] = path_json(st.path);
          } else if constexpr (std::is_same_v<T, GroupStage>) {
            outer["keys"] = arr(st.keys, path_json);
            outer["names"] = st.names;
            outer["aggs"] = arr(st.aggs, agg_json);
          } else {
            outer["local"] = path_json(st.local);
            outer["foreign"] = path_json(st.foreign);
            outer["from"] = st.from;
            outer["as"] = st.as;
          }
        },
        s);
    j = std::move(outer);
  }
  return j;
}

Query query_from_json(const Json& j, const std::string& where) {
  std::string op = str_field(j, "op", where);
  if (op == "Collection") return Query(str_field(j, "name", where));
  Query q = query_from_json(field(j, "inner", where), where + "/inner");
  auto sub = [&](const char* k) { return where + "/" + k; };
  if (op == "Project") {
    q.stages.push_back(ProjectStage{vec_of(field(j, "paths", where), sub("paths"), path_of)});
  } else if (op == "Match") {
    q.stages.push_back(MatchStage{pred_of(field(j, "pred", where), sub("pred"))});
  } else if (op == "AddFields") {
    q.stages.push_back(AddFieldsStage{vec_of(field(j, "paths", where), sub("paths"), path_of),
                                      vec_of(field(j, "exprs", where), sub("exprs"), expr_of)});
  } else if (op == "Unwind") {
    q.stages.push_back(UnwindStage{path_of(field(j, "path", where), sub("path"))});
  } else if (op == "Group") {
    auto name_of = [](const Json& e, const std::string& w) {
      if (!e.is_string()) throw InputError(w, "expected a string");
      return e.get<std::string>();
    };
    q.stages.push_back(GroupStage{vec_of(field(j, "keys", where), sub("keys"), path_of),
                                  vec_of(field(j, "names", where), sub("names"), name_of),
                                  vec_of(field(j, "aggs", where), sub("aggs"), agg_of)});
  } else if (op == "Lookup") {
    q.stages.push_back(LookupStage{path_of(field(j, "local", where), sub("local")),
                                   path_of(field(j, "foreign", where), sub("foreign")),
                                   str_field(j, "from", where), str_field(j, "as", where)});
  } else {
    throw InputError(sub("op"), "unknown operator '" + op + "'");
  }
  try {
    check_well_formed(q);
  } catch (const Error& e) {
    throw InputError(where, e.what());
  }
  return q;
}

}  // namespace docsynth
