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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace docsynth {

enum class SizeRel { Eq, Le, Ge, Lt };

/// `l_var = value`
struct Grounding {
  int var = 0;
  std::int64_t value = 0;
  friend bool operator==(const Grounding&, const Grounding&) = default;
};

/// `l_lhs rel l_rhs`
struct Link {
  int lhs = 0;
  SizeRel rel = SizeRel::Eq;
  int rhs = 0;
  friend bool operator==(const Link&, const Link&) = default;
};

using SizeAtom = std::variant<Grounding, Link>;

/// Conjunction of size atoms over stage-size variables l0..ln.
class SizeFormula {
 public:
  SizeFormula() = default;
  explicit SizeFormula(std::vector<SizeAtom> atoms) : atoms_(std::move(atoms)) {}

  /// `l0 = n`
  static SizeFormula grounded(std::int64_t n) { return SizeFormula({Grounding{0, n}}); }

  /// Adds `l_{k+1} rel l_k` where k is the current max label.
  SizeFormula extend(SizeRel rel) const;

  const std::vector<SizeAtom>& atoms() const { return atoms_; }
  /// Largest variable index mentioned.
  int max_label() const;
  /// `l0 = 3 ∧ l1 ≥ l0 ∧ ...`
  std::string text() const;

  friend bool operator==(const SizeFormula&, const SizeFormula&) = default;

 private:
  std::vector<SizeAtom> atoms_;
};

/// Extra constraint `l_var = value` checked together with a formula.
struct SizeProbe {
  int var = 0;
  std::int64_t value = 0;
};

/// Satisfiability over non-negative integers. Backend seam: callers depend
/// only on this interface.
class SizeSolver {
 public:
  virtual ~SizeSolver() = default;
  virtual bool is_sat(const SizeFormula& f, std::optional<SizeProbe> probe = std::nullopt) const = 0;
};

/// Forward interval propagation; exact for chain formulas where every link
/// relates l_{i+1} to l_i and l0 is grounded once. Throws MalformedFormula
/// otherwise, and for probes on anything but the last variable.
class IntervalSolver final : public SizeSolver {
 public:
  bool is_sat(const SizeFormula& f, std::optional<SizeProbe> probe = std::nullopt) const override;
};

const SizeSolver& default_solver();

inline bool is_sat(const SizeFormula& f, std::optional<SizeProbe> probe = std::nullopt) {
  return default_solver().is_sat(f, probe);
}

inline int max_label(const SizeFormula& f) { return f.max_label(); }

}  // namespace docsynth
