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

#include "docsynth/abstraction.hpp"
#include "docsynth/error.hpp"
#include "docsynth/eval.hpp"
#include "docsynth/query.hpp"
#include "fixtures.hpp"
#include "gen.hpp"

using namespace docsynth;

namespace {

const ValueType kNum = ValueType::num();
const ValueType kStr = ValueType::str();
const ValueType kBool = ValueType::boolean();

Slot num() { return Slot::of(kNum); }
Slot str() { return Slot::of(kStr); }
AttrKey plus(int k) { return Placeholder{Placeholder::Arity::Plus, k}; }
AttrKey one(int k) { return Placeholder{Placeholder::Arity::One, k}; }

ValueType replies_type() { return ValueType::array(ValueType::doc(DocumentType{{"depth", kNum}})); }

DocumentType posts_type() {
  return DocumentType{{"_id", kStr}, {"title", kStr}, {"replies", replies_type()}};
}

SizeFormula chain(std::int64_t l0, std::initializer_list<SizeRel> rels) {
  SizeFormula f = SizeFormula::grounded(l0);
  for (SizeRel r : rels) f = f.extend(r);
  return f;
}

// Direct reading of the match conditions: some assignment of every concrete
// attribute to exactly one entry, with named entries taking exactly their own
// attribute, ?¹ exactly one, ?⁺ at least one, all types compatible.
bool brute_matches(const DocumentType& t, const AugmentedType& aug) {
  std::vector<std::pair<std::string, ValueType>> attrs(t.begin(), t.end());
  const auto& es = aug.entries();
  if (es.empty()) return attrs.empty();
  std::vector<std::size_t> f(attrs.size(), 0);
  while (true) {
    bool ok = true;
    for (std::size_t j = 0; j < es.size() && ok; ++j) {
      std::vector<std::size_t> pre;
      for (std::size_t i = 0; i < attrs.size(); ++i)
        if (f[i] == j) pre.push_back(i);
      const Slot& s = es[j].second;
      for (auto i : pre) ok = ok && (s.is_any() || s.type() == attrs[i].second);
      if (const auto* n = std::get_if<std::string>(&es[j].first)) {
        ok = ok && pre.size() == 1 && attrs[pre[0]].first == *n;
      } else if (std::get<Placeholder>(es[j].first).arity == Placeholder::Arity::One) {
        ok = ok && pre.size() == 1;
      } else {
        ok = ok && !pre.empty();
      }
    }
    if (ok) return true;
    std::size_t i = 0;
    while (i < f.size() && ++f[i] == es.size()) f[i++] = 0;
    if (i == f.size()) return false;
  }
}

// Builds an augmented type that often (not always) matches `t`.
AugmentedType perturbed(gen::DataGen& g, const DocumentType& t) {
  AugmentedType out;
  int label = 0;
  std::vector<AttrKey> pluses;
  for (const auto& [k, v] : t) {
    int r = g.uniform(0, 9);
    Slot s = g.coin() ? Slot::of(v) : Slot::any();
    if (g.uniform(0, 7) == 0) s = Slot::of(g.primitive_type());
    if (r <= 3) {
      out.set(k, s);
    } else if (r <= 5) {
      out.set(one(label++), s);
    } else if (r <= 7 || pluses.empty()) {
      pluses.push_back(plus(label++));
      out.set(pluses.back(), s);
    }  // else: absorbed by an existing ?⁺ (its type may not fit)
  }
  if (g.uniform(0, 5) == 0) out.set(plus(label++), Slot::any());
  if (g.uniform(0, 5) == 0) out.set(one(label++), Slot::of(kNum));
  return out;
}

}  // namespace

TEST_CASE("abstraction: union, intersection, subset examples") {
  AugmentedType a{{"a", num()}};
  CHECK(type_union(a, AugmentedType{{"b", str()}}) == AugmentedType{{"a", num()}, {"b", str()}});
  // conflicting attribute goes to ⊥ and is removed
  CHECK(type_union(a, AugmentedType{{"a", str()}}).empty());
  CHECK(type_union(a, a) == a);
  CHECK(type_intersect(AugmentedType{{"a", num()}, {"b", str()}}, AugmentedType{{"a", num()}, {"c", Slot::of(kBool)}}) ==
        AugmentedType{{"a", num()}});
  CHECK(type_subset(a, AugmentedType{{"a", num()}, {"b", str()}}));
  CHECK_FALSE(type_subset(AugmentedType{{"a", num()}, {"b", str()}}, a));
  CHECK_FALSE(type_subset(AugmentedType{{"a", str()}}, a));

  // nested documents recurse
  AugmentedType n1{{"d", Slot::of(ValueType::doc(DocumentType{{"x", kNum}}))}};
  AugmentedType n2{{"d", Slot::of(ValueType::doc(DocumentType{{"y", kStr}}))}};
  CHECK(type_union(n1, n2) == AugmentedType{{"d", Slot::of(ValueType::doc(DocumentType{{"x", kNum}, {"y", kStr}}))}});
  CHECK(type_intersect(n1, n2) == AugmentedType{{"d", Slot::of(ValueType::doc(DocumentType{}))}});

  // placeholders are keys like any other
  AugmentedType h{{plus(0), Slot::any()}, {"t", str()}};
  CHECK(type_union(h, AugmentedType{{plus(0), num()}}) == AugmentedType{{"t", str()}});
  CHECK(type_union(h, AugmentedType{{plus(1), num()}}).size() == 3);
}

TEST_CASE("abstraction: subtract, member, replace") {
  AugmentedType ab{{"a", num()}, {"b", str()}};
  CHECK(type_subtract(ab, AugmentedType{{"a", num()}}) == AugmentedType{{"b", str()}});
  CHECK_THROWS_AS(type_subtract(ab, AugmentedType{{"c", num()}}), NotASubset);
  CHECK_THROWS_AS(type_subtract(ab, AugmentedType{{"a", str()}}), NotASubset);

  AugmentedType posts = AugmentedType::from(posts_type());
  CHECK(type_member(AttrKey("replies"), posts));
  CHECK_FALSE(type_member(AttrKey("depth"), posts));  // inside an array, not a document
  AugmentedType nested{{"info", Slot::of(ValueType::doc(DocumentType{{"tel", kStr}}))}};
  CHECK(type_member(AttrKey("tel"), nested));
  CHECK_FALSE(type_member(plus(1), nested));

  auto elem = ValueType::doc(DocumentType{{"depth", kNum}});
  CHECK(type_replace(AugmentedType{{"replies", Slot::of(replies_type())}}, AttrKey("replies"), Slot::of(elem)) ==
        AugmentedType{{"replies", Slot::of(elem)}});
  CHECK(type_replace(nested, AttrKey("tel"), num()) ==
        AugmentedType{{"info", Slot::of(ValueType::doc(DocumentType{{"tel", kNum}}))}});
  CHECK(type_replace(nested, AttrKey("zzz"), num()) == nested);
  // leftmost nested occurrence wins
  AugmentedType two{{"p", Slot::of(ValueType::doc(DocumentType{{"x", kNum}}))},
                    {"q", Slot::of(ValueType::doc(DocumentType{{"x", kNum}}))}};
  auto r = type_replace(two, AttrKey("x"), str());
  CHECK(*r.find(AttrKey("p")) == Slot::of(ValueType::doc(DocumentType{{"x", kStr}})));
  CHECK(*r.find(AttrKey("q")) == Slot::of(ValueType::doc(DocumentType{{"x", kNum}})));

  CHECK(type_replace_at(two, AccessPath::parse("q.x"), kBool).find(AttrKey("q"))->type() ==
        ValueType::doc(DocumentType{{"x", kBool}}));
  CHECK_THROWS_AS(type_replace_at(two, AccessPath::parse("q.y"), kBool), Error);
}

TEST_CASE("abstraction: to_doc_type") {
  CHECK(to_doc_type(AugmentedType{{"a", str()}, {plus(1), Slot::any()}}) == DocumentType{{"a", kStr}});
  CHECK(to_doc_type(AugmentedType{{one(3), Slot::of(replies_type())}}).empty());
  CHECK(to_doc_type(AugmentedType{{plus(0), Slot::any()}, {plus(3), num()}}).empty());
  CHECK(to_doc_type(AugmentedType{{"a", Slot::any()}, {"b", num()}}) == DocumentType{{"b", kNum}});
}

TEST_CASE("abstraction: equivalence ignores order and labels") {
  AugmentedType a{{"t", str()}, {plus(0), Slot::any()}, {plus(3), num()}};
  AugmentedType b{{plus(9), num()}, {plus(4), Slot::any()}, {"t", str()}};
  CHECK(equivalent(a, b));
  CHECK_FALSE(a == b);
  CHECK(a == AugmentedType{{plus(3), num()}, {"t", str()}, {plus(0), Slot::any()}});
  CHECK_FALSE(equivalent(a, AugmentedType{{"t", str()}, {one(0), Slot::any()}, {plus(3), num()}}));
  CHECK(a.text() == "{t: String, ?⁺0: Any, ?⁺3: Num}");
}

TEST_CASE("abstraction: match examples") {
  CHECK(matches(DocumentType{{"reply_count", kNum}, {"title", kStr}},
                AugmentedType{{plus(0), Slot::any()}, {plus(2), num()}}));

  auto profs = ValueType::array(ValueType::doc(DocumentType{{"profId", kStr}, {"profName", kStr}}));
  auto info = ValueType::doc(DocumentType{{"tel", kStr}});
  AugmentedType aug{{"name", str()}, {"id", str()},       {"info", Slot::of(info)},
                    {plus(1), num()}, {plus(2), Slot::any()}, {one(3), Slot::of(profs)}};
  DocumentType t{{"id", kStr},      {"name", kStr},  {"info", info},
                 {"newField", kBool}, {"sum", kNum}, {"profs", profs}};
  CHECK(matches(t, aug));
  CHECK(brute_matches(t, aug));

  CHECK_FALSE(matches(DocumentType{{"a", kNum}}, AugmentedType{{"a", num()}, {plus(1), num()}}));
  CHECK_FALSE(matches(DocumentType{{"a", kNum}, {"b", kNum}}, AugmentedType{{one(1), num()}}));
  CHECK(matches(DocumentType{{"a", kNum}, {"b", kNum}}, AugmentedType{{plus(1), num()}}));
  CHECK_FALSE(matches(DocumentType{{"a", kNum}, {"b", kStr}}, AugmentedType{{plus(1), num()}}));
  CHECK(matches(DocumentType{}, AugmentedType{}));
  CHECK_FALSE(matches(DocumentType{}, AugmentedType{{plus(1), Slot::any()}}));
  // a greedy choice that must be undone: ?¹ Any would like `a`, but ?⁺ Num needs it
  CHECK(matches(DocumentType{{"a", kNum}, {"b", kStr}}, AugmentedType{{one(0), Slot::any()}, {plus(1), num()}}));
}

TEST_CASE("abstraction: concretization of the worked example") {
  using R = SizeRel;
  AbstractCollection final_abs{AugmentedType{{plus(0), Slot::any()}, {plus(3), num()}},
                               chain(3, {R::Ge, R::Le, R::Lt, R::Eq, R::Le, R::Eq}), 6};
  CHECK(concretizes(fixtures::posts_output(), final_abs));

  AbstractCollection raw{AugmentedType::from(posts_type()), SizeFormula::grounded(3), 0};
  CHECK_FALSE(concretizes(fixtures::posts_output(), raw));
  CHECK(concretizes(fixtures::posts(), raw));

  // empty collection: only the size half is checked
  AbstractCollection shrink{AugmentedType{{"zzz", num()}}, chain(3, {R::Le}), 1};
  CHECK(concretizes(Collection{}, shrink));
  CHECK_FALSE(concretizes(Collection{}, AbstractCollection{AugmentedType{}, chain(3, {R::Ge}), 1}));
  CHECK_FALSE(concretizes(Collection{}, raw));
  // untypable output never concretizes
  CHECK_FALSE(concretizes(Collection{Document{{"a", 1}}, Document{{"a", "x"}}},
                          AbstractCollection{AugmentedType{{plus(1), Slot::any()}}, chain(3, {R::Le}), 1}));
}

TEST_CASE("abstraction: abstract database of an input") {
  auto adb = abstract_db_of(fixtures::posts_db(), compute_schema(fixtures::posts_db()));
  REQUIRE(adb.size() == 1);
  const auto& p = adb.at("posts");
  CHECK(p.type == AugmentedType::from(posts_type()));
  CHECK(p.formula.text() == "l0 = 3");
  CHECK(p.result_var == 0);

  Database two{{"a", fixtures::posts()}, {"b", Collection{}}};
  Schema s(Schema::Map{{"a", ValueType::array(ValueType::doc(posts_type()))},
                       {"b", ValueType::array(ValueType::doc(DocumentType{{"k", kNum}}))}});
  auto adb2 = abstract_db_of(two, s);
  CHECK(adb2.at("a").formula.text() == "l0 = 3");
  CHECK(adb2.at("b").formula.text() == "l0 = 0");
  CHECK(adb2.at("b").type == AugmentedType{{"k", num()}});
}

TEST_CASE("abstraction: algebra properties on random types") {
  std::mt19937 rng(5);
  gen::DataGen g(rng);
  for (int iter = 0; iter < 1000; ++iter) {
    auto a = AugmentedType::from(g.random_doc_type(g.uniform(0, 4), 2));
    auto b = AugmentedType::from(g.random_doc_type(g.uniform(0, 4), 2));
    INFO(a.text(), " / ", b.text());
    CHECK(type_union(a, b) == type_union(b, a));
    CHECK(type_intersect(a, b) == type_intersect(b, a));
    CHECK(type_union(a, a) == a);
    CHECK(type_intersect(a, a) == a);
    CHECK(type_subset(a, a));
    auto i = type_intersect(a, b);
    CHECK(type_subset(i, a));
    CHECK(type_subset(i, b));
    CHECK(type_subtract(a, i).size() == a.size() - i.size());
    CHECK(type_subset(a, b) == (type_intersect(a, b) == a && type_union(a, b) == b));
  }
}

TEST_CASE("abstraction: matching degenerates to equality without placeholders") {
  std::mt19937 rng(9);
  gen::DataGen g(rng);
  int equal = 0;
  for (int iter = 0; iter < 2000; ++iter) {
    auto t = g.random_doc_type(g.uniform(0, 3), 1);
    auto u = g.coin() ? t : g.random_doc_type(g.uniform(0, 3), 1);
    CHECK(matches(t, AugmentedType::from(u)) == (t == u));
    equal += t == u;
  }
  CHECK(equal > 500);
}

TEST_CASE("abstraction: backtracking match agrees with exhaustive assignment") {
  std::mt19937 rng(13);
  gen::DataGen g(rng);
  int positive = 0;
  for (int iter = 0; iter < 3000; ++iter) {
    auto t = g.random_doc_type(g.uniform(0, 5), 1);
    auto aug = perturbed(g, t);
    INFO(t.text(), " vs ", aug.text());
    bool m = matches(t, aug);
    REQUIRE(m == brute_matches(t, aug));
    positive += m;

    if (!m) continue;
    // generalising a named entry to Any keeps the match
    for (const auto& [k, s] : aug.entries()) {
      if (!std::holds_alternative<std::string>(k)) continue;
      AugmentedType general = aug;
      general.set(k, Slot::any());
      CHECK(matches(t, general));
    }
  }
  CHECK(positive > 300);
  CHECK(positive < 2700);
}
