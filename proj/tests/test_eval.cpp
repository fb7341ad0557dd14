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

#include <doctest.h>

#include <random>

#include <docsynth/error.hpp>
#include <docsynth/eval.hpp>

#include "fixtures.hpp"
#include "gen.hpp"
#include "query_gen.hpp"

using namespace docsynth;

namespace {

AccessPath P(const char* s) { return AccessPath::parse(s); }

std::size_t array_len(const Document& d, const AccessPath& h) {
  const Value* v = get_path(d, h);
  return v && v->is_array() ? v->as_array().size() : 0;
}

}  // namespace

TEST_CASE("Unwind flattens one document per element") {
  Database db{{"N", {Document{{"a", 1}, {"b", Array{2, 3}}}, Document{{"a", 4}, {"b", Array{5, 6}}}}}};
  Collection expected{Document{{"a", 1}, {"b", 2}}, Document{{"a", 1}, {"b", 3}}, Document{{"a", 4}, {"b", 5}},
                      Document{{"a", 4}, {"b", 6}}};
  CHECK(eval_query(db, parse_query("Unwind(N, b)")) == expected);
}

TEST_CASE("Unwind drops absent/null/empty and rejects scalars") {
  Database db{{"N", {Document{{"b", Array{}}}, Document{{"b", Value()}}, Document{{"a", 1}}}}};
  CHECK(eval_query(db, parse_query("Unwind(N, b)")).empty());
  Database bad{{"N", {Document{{"b", 3}}}}};
  CHECK_THROWS_AS(eval_query(bad, parse_query("Unwind(N, b)")), UnwindNonArray);
  CHECK_THROWS_AS(eval_query(bad, parse_query("Unwind(M, b)")), UnknownCollection);
}

TEST_CASE("Match true is the identity") {
  Database db = fixtures::posts_db();
  CHECK(eval_query(db, parse_query("Match(posts, true)")) == db["posts"]);
  CHECK(eval_query(db, parse_query("Match(posts, false)")).empty());
}

TEST_CASE("forum pipeline produces the expected output") {
  Collection out = eval_query(fixtures::posts_db(), parse_query(fixtures::kPostsQuery));
  CHECK(same_collection(out, fixtures::posts_output()));
  // Group emits keys in first-occurrence order.
  REQUIRE(out.size() == 2);
  CHECK(*out[0].find("title") == Value("Title-2"));
}

TEST_CASE("forum pipeline replayed stage by stage") {
  Database db = fixtures::posts_db();
  Query q = parse_query(fixtures::kPostsQuery);
  Collection cur = db["posts"];

  cur = eval_stage(db, cur, q.stages[0]);  // Unwind
  CHECK(cur.size() == 10);
  CHECK(cur[0] == Document{{"_id", "1"}, {"title", "Title-1"}, {"replies", Document{{"depth", 0}}}});

  cur = eval_stage(db, cur, q.stages[1]);  // Match depth > 0
  CHECK(cur.size() == 6);
  std::vector<int> per_post{0, 0, 0};
  for (const auto& d : cur) per_post[std::stoi(d.find("_id")->as_str()) - 1]++;
  CHECK(per_post == std::vector<int>{1, 2, 3});

  cur = eval_stage(db, cur, q.stages[2]);  // Group
  Collection grouped{
      Document{{"_id", Document{{"_id", "1"}, {"title", "Title-1"}}}, {"reply_count", 1}},
      Document{{"_id", Document{{"_id", "2"}, {"title", "Title-2"}}}, {"reply_count", 2}},
      Document{{"_id", Document{{"_id", "3"}, {"title", "Title-3"}}}, {"reply_count", 3}},
  };
  CHECK(cur == grouped);

  cur = eval_stage(db, cur, q.stages[3]);  // AddFields title
  CHECK(*cur[2].find("title") == Value("Title-3"));

  cur = eval_stage(db, cur, q.stages[4]);  // Match reply_count > 1
  CHECK(cur.size() == 2);

  cur = eval_stage(db, cur, q.stages[5]);  // Project
  CHECK(cur == Collection{Document{{"reply_count", 2}, {"title", "Title-2"}},
                          Document{{"reply_count", 3}, {"title", "Title-3"}}});
}

TEST_CASE("eval_pred null handling") {
  CHECK_FALSE(eval_pred(Document{{"depth", 0}}, parse_pred("depth > 0")));
  CHECK_FALSE(eval_pred(Document{{"a", Value()}}, parse_pred("a < 5")));
  CHECK(eval_pred(Document{{"a", Value()}}, parse_pred("a = null")));
  CHECK(eval_pred(Document{}, parse_pred("a = null")));
  CHECK_FALSE(eval_pred(Document{}, parse_pred("a <= 5")));
  CHECK(eval_pred(Document{{"a", Value()}}, parse_pred("a <= null")));
  CHECK_FALSE(eval_pred(Document{{"a", "x"}}, parse_pred("a < 5")));
  CHECK(eval_pred(Document{{"a", Array{1, 2}}}, parse_pred("SizeEq(a, 2)")));
  CHECK_FALSE(eval_pred(Document{{"a", Value()}}, parse_pred("SizeEq(a, 0)")));
  CHECK(eval_pred(Document{{"a", Value()}}, parse_pred("Exists(a)")));
  CHECK_FALSE(eval_pred(Document{}, parse_pred("Exists(a)")));
}

TEST_CASE("eval_pred agrees with a truth table of the comparison rules") {
  // Oracle written from the rule text: = and != compare directly; < and >
  // are false with a null side; <= and >= are the disjunction with =.
  std::vector<Value> vals{Value(), Value(0), Value(1), Value(2), Value("a")};
  for (const auto& v : vals)
    for (const auto& c : vals)
      for (int o = 0; o < 6; ++o) {
        auto op = static_cast<CmpOp>(o);
        bool either_null = v.is_null() || c.is_null();
        bool comparable = v.kind() == c.kind() && !either_null;
        bool lt = comparable && *compare_primitive(v, c) < 0;
        bool gt = comparable && *compare_primitive(v, c) > 0;
        bool eq = v == c;
        bool expected = false;
        switch (op) {
          case CmpOp::Eq: expected = eq; break;
          case CmpOp::Ne: expected = !eq; break;
          case CmpOp::Lt: expected = lt; break;
          case CmpOp::Gt: expected = gt; break;
          case CmpOp::Le: expected = lt || eq; break;
          case CmpOp::Ge: expected = gt || eq; break;
        }
        CHECK(eval_pred(Document{{"h", v}}, Pred::cmp(P("h"), op, c)) == expected);
      }
}

TEST_CASE("eval_expr") {
  CHECK(eval_expr(Document{{"x", 3}, {"y", 4}}, Expr::arith(P("x"), ArithOp::Add, P("y"))) == Value(7));
  CHECK(eval_expr(Document{{"x", 3}}, Expr::arith(P("x"), ArithOp::Add, P("y"))).is_null());
  CHECK(eval_expr(Document{{"x", -2}}, Expr::call(MathFn::Abs, P("x"))) == Value(2));
  CHECK(eval_expr(Document{{"x", 1}, {"y", 0}}, Expr::arith(P("x"), ArithOp::Div, P("y"))).is_null());
  CHECK(eval_expr(Document{{"x", 7}, {"y", 3}}, Expr::arith(P("x"), ArithOp::Mod, P("y"))) == Value(1));
  CHECK(eval_expr(Document{{"x", 2.5}}, Expr::call(MathFn::Floor, P("x"))) == Value(2));
  CHECK(eval_expr(Document{{"x", 2.5}}, Expr::call(MathFn::Ceil, P("x"))) == Value(3));
}

TEST_CASE("eval_agg null handling") {
  Collection three{Document{{"x", 1}}, Document{{"x", Value()}}, Document{{"x", 2}}};
  CHECK(eval_agg(three, Agg::count()) == Value(3));
  CHECK(eval_agg(three, Agg::of(AggKind::Sum, P("x"))) == Value(3));
  CHECK(eval_agg(three, Agg::of(AggKind::Avg, P("x"))) == Value(1.5));
  CHECK(eval_agg(three, Agg::of(AggKind::Min, P("x"))) == Value(1));
  CHECK(eval_agg(three, Agg::of(AggKind::Max, P("x"))) == Value(2));
  Collection nulls{Document{{"x", Value()}}};
  CHECK(eval_agg(nulls, Agg::of(AggKind::Min, P("x"))).is_null());
  CHECK(eval_agg(nulls, Agg::of(AggKind::Max, P("x"))).is_null());
  CHECK(eval_agg(nulls, Agg::of(AggKind::Avg, P("x"))).is_null());
  CHECK(eval_agg(nulls, Agg::of(AggKind::Sum, P("x"))) == Value(0));
}

TEST_CASE("extract_attrs / add_attrs / flatten") {
  Document post{{"_id", "1"}, {"title", "T"}, {"replies", fixtures::depths({0})}};
  CHECK(extract_attrs(post, {P("_id"), P("title")}) == Document{{"_id", "1"}, {"title", "T"}});
  CHECK(extract_attrs(Document{{"a", Document{{"b", 1}, {"c", 2}}}}, {P("a.b"), P("z")}) ==
        Document{{"a", Document{{"b", 1}}}});

  Document g{{"_id", Document{{"title", "T"}}}};
  CHECK(add_attrs(g, {P("title")}, {Value("T")}) == Document{{"_id", Document{{"title", "T"}}}, {"title", "T"}});
  CHECK(add_attrs(Document{{"a", 1}}, {P("a")}, {Value(2)}) == Document{{"a", 1}});
  CHECK(add_attrs(Document{}, {P("x.y")}, {Value(2)}) == Document{{"x", Document{{"y", 2}}}});

  CHECK(flatten(Document{{"a", 1}, {"b", Array{2, 3}}}, P("b")) ==
        Collection{Document{{"a", 1}, {"b", 2}}, Document{{"a", 1}, {"b", 3}}});
  CHECK(flatten(Document{{"a", Document{{"b", Array{1, 2}}}}}, P("a.b")).size() == 2);
}

TEST_CASE("Group and Lookup") {
  Database db{{"s", {Document{{"name", "a"}, {"class", "x"}, {"info", Document{{"score", 90}}}},
                     Document{{"name", "a"}, {"class", "x"}, {"info", Document{{"score", 70}}}},
                     Document{{"name", "b"}, {"class", "y"}, {"info", Document{{"score", 60}}}}}},
              {"c", {Document{{"cls", "x"}, {"room", 1}}, Document{{"cls", "z"}, {"room", 2}}}}};
  Collection g = eval_query(db, parse_query("Group(s, [name, class], [total], [Sum(info.score)])"));
  CHECK(g == Collection{Document{{"_id", Document{{"name", "a"}, {"class", "x"}}}, {"total", 160}},
                        Document{{"_id", Document{{"name", "b"}, {"class", "y"}}}, {"total", 60}}});
  Collection j = eval_query(db, parse_query("Lookup(s, class, cls, c, rooms)"));
  REQUIRE(j.size() == 3);
  CHECK(j[0].find("rooms")->as_array().size() == 1);
  CHECK(j[2].find("rooms")->as_array().empty());
  CHECK(eval_query(Database{{"e", {}}}, parse_query("Group(e, [a], [], [])")).empty());
  CHECK_THROWS_AS(eval_query(db, parse_query("Lookup(s, class, cls, nope, r)")), UnknownCollection);
  CHECK_THROWS(eval_query(db, parse_query("Group(s, [name, info.name], [], [])")));
}

TEST_CASE("property: size relations between stage input and output") {
  std::mt19937 rng(17);
  int groups = 0;
  for (int i = 0; i < 400; ++i) {
    gen::DataGen g(rng);
    Schema s = g.random_schema();
    Database db = g.database(s, 6, 0);
    qgen::TypedGen tg(rng, {});
    Query q = tg.generate(db, s.map().begin()->first, 4);
    Collection cur = db[q.collection];
    for (const auto& st : q.stages) {
      Collection out = eval_stage(db, cur, st);
      CHECK(eval_stage(db, cur, st) == out);  // determinism
      switch (op_of(st)) {
        case OpKind::Match: CHECK(out.size() <= cur.size()); break;
        case OpKind::Project:
        case OpKind::AddFields:
        case OpKind::Lookup: CHECK(out.size() == cur.size()); break;
        case OpKind::Unwind: {
          std::size_t total = 0;
          for (const auto& d : cur) total += array_len(d, std::get<UnwindStage>(st).path);
          CHECK(out.size() == total);
          break;
        }
        case OpKind::Group: {
          ++groups;
          const auto& keys = std::get<GroupStage>(st).keys;
          std::set<std::string> distinct;
          for (const auto& d : cur) distinct.insert(canonical_string(group_key(d, keys)));
          CHECK(out.size() == distinct.size());
          if (!cur.empty()) CHECK(out.size() <= cur.size());
          // Strict shrinkage exactly when some key repeats.
          CHECK((out.size() < cur.size()) == (distinct.size() < cur.size()));
          std::set<std::string> out_keys;
          for (const auto& d : out) out_keys.insert(canonical_string(*d.find("_id")));
          CHECK(out_keys.size() == out.size());
          break;
        }
      }
      cur = std::move(out);
    }
    CHECK(eval_query(db, q) == cur);
  }
  CHECK(groups > 20);
}
