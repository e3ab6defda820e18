#pragma once

#include <map>

#include "cms/numeric.hpp"
#include "cms/orbit.hpp"
#include "cms/word.hpp"

namespace cms {

/// A finitely represented element of L(Σ): values on cylinders of selected
/// depths, each depth complete for symbols up to its own cap. Unlisted
/// cylinders at a represented depth have value 0.
class CylinderFunction {
 public:
  CylinderFunction() = default;
  /// Validates ranges, representability, monotonicity (F(Cs) <= F(C)) and
  /// within-table finite additivity (Σ_s F(Cs) <= F(C), Σ_s F([s]) <= 1).
  CylinderFunction(std::map<std::size_t, Symbol> depth_caps, std::map<Word, Rational> entries);

  /// Table of ν on every cylinder of depth 1..depth with symbols <= cap.
  static CylinderFunction from_measure(const ConvexCombination& nu, std::size_t depth, Symbol cap);
  static CylinderFunction zero(std::size_t depth, Symbol cap);

  bool represents(const Cylinder& c) const;
  /// Throws NotRepresented outside the represented depths and caps.
  Rational value(const Cylinder& c) const;

  const std::map<std::size_t, Symbol>& depth_caps() const noexcept { return caps_; }
  const std::map<Word, Rational>& entries() const noexcept { return entries_; }
  std::size_t max_depth() const noexcept { return caps_.empty() ? 0 : caps_.rbegin()->first; }
  Symbol cap_at(std::size_t depth) const;

  /// Σ_{s <= cap_1} F([s]).
  Rational depth_one_mass() const;

  friend bool operator==(const CylinderFunction&, const CylinderFunction&) = default;

 private:
  std::map<std::size_t, Symbol> caps_;
  std::map<Word, Rational> entries_;
};

/// δ_K(C) = F(C) − Σ_{k <= K} F(Ck) over admissible Ck (inadmissible ones are
/// 0 in any element of L(Σ) and are skipped by the table default).
Rational additivity_defect(const CylinderFunction& f, const Cylinder& c, Symbol k_max);

/// Same report as for combinations. Rejects tables that are not additive at
/// their represented horizon (such a table is not a measure).
InvarianceReport invariance_check(const CylinderFunction& f);

}  // namespace cms
