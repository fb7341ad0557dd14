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

#include "docsynth/size_formula.hpp"

#include <algorithm>
#include <limits>

#include "docsynth/error.hpp"

namespace docsynth {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

std::string var(int i) { return "l" + std::to_string(i); }

const char* rel_text(SizeRel r) {
  switch (r) {
    case SizeRel::Eq: return "=";
    case SizeRel::Le: return "≤";
    case SizeRel::Ge: return "≥";
    case SizeRel::Lt: return "<";
  }
  return "?";
}

}  // namespace

SizeFormula SizeFormula::extend(SizeRel rel) const {
  SizeFormula f = *this;
  int k = max_label();
  f.atoms_.push_back(Link{k + 1, rel, k});
  return f;
}

int SizeFormula::max_label() const {
  int m = 0;
  for (const auto& a : atoms_) {
    if (auto* g = std::get_if<Grounding>(&a)) m = std::max(m, g->var);
    if (auto* l = std::get_if<Link>(&a)) m = std::max({m, l->lhs, l->rhs});
  }
  return m;
}

std::string SizeFormula::text() const {
  std::string out;
  for (const auto& a : atoms_) {
    if (!out.empty()) out += " ∧ ";
    if (auto* g = std::get_if<Grounding>(&a))
      out += var(g->var) + " = " + std::to_string(g->value);
    else {
      const auto& l = std::get<Link>(a);
      out += var(l.lhs) + " " + rel_text(l.rel) + " " + var(l.rhs);
    }
  }
  return out.empty() ? "true" : out;
}

bool IntervalSolver::is_sat(const SizeFormula& f, std::optional<SizeProbe> probe) const {
  int n = f.max_label();
  std::optional<std::int64_t> ground;
  std::vector<std::optional<Link>> link(static_cast<std::size_t>(n) + 1);
  for (const auto& a : f.atoms()) {
    if (auto* g = std::get_if<Grounding>(&a)) {
      if (g->var != 0 || ground) throw MalformedFormula("exactly one grounding atom l0 = c is required");
      if (g->value < 0) throw MalformedFormula("sizes are non-negative");
      ground = g->value;
    } else {
      const auto& l = std::get<Link>(a);
      if (l.lhs != l.rhs + 1 || l.rhs < 0) throw MalformedFormula("links must relate l_{i+1} to l_i");
      auto& slot = link[static_cast<std::size_t>(l.lhs)];
      if (slot) throw MalformedFormula("variable " + var(l.lhs) + " is constrained twice");
      slot = l;
    }
  }
  if (!ground) throw MalformedFormula("missing grounding atom l0 = c");
  for (int i = 1; i <= n; ++i)
    if (!link[static_cast<std::size_t>(i)]) throw MalformedFormula("variable " + var(i) + " is unconstrained");
  if (probe && probe->var != n) throw MalformedFormula("probe must constrain the last variable");

  std::int64_t lo = *ground, hi = *ground;
  for (int i = 1; i <= n; ++i) {
    switch (link[static_cast<std::size_t>(i)]->rel) {
      case SizeRel::Eq: break;
      case SizeRel::Le: lo = 0; break;
      case SizeRel::Ge: hi = kInf; break;
      case SizeRel::Lt:
        if (hi < 1) return false;
        lo = 0;
        if (hi != kInf) hi -= 1;
        break;
    }
  }
  if (probe) return probe->value >= lo && probe->value <= hi;
  return true;
}

const SizeSolver& default_solver() {
  static const IntervalSolver solver;
  return solver;
}

}  // namespace docsynth
