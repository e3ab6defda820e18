#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cms/numeric.hpp"
#include "cms/shift.hpp"
#include "cms/word.hpp"

namespace cms {

/// A primitive admissible cyclic word, stored as its least rotation.
class PeriodicOrbit {
 public:
  /// Validates admissibility and closure. Proper powers are reduced to their
  /// primitive root; `reduced_from()` then reports the original length.
  static PeriodicOrbit from_cycle(const ShiftSpec& spec, const Word& cycle);

  const Word& cycle() const noexcept { return cycle_; }
  std::size_t period() const noexcept { return cycle_.size(); }
  std::size_t reduced_from() const noexcept { return reduced_from_; }
  bool was_reduced() const noexcept { return reduced_from_ != cycle_.size(); }

  /// Positions j in [0, T) at which the cyclic word read from j begins with w.
  std::uint64_t occurrences(std::span<const Symbol> w) const;
  /// Positions whose symbol exceeds t.
  std::uint64_t count_above(Symbol t) const;
  Symbol max_symbol() const noexcept { return cycle_.max_symbol(); }
  /// Distinct symbols, ascending.
  std::vector<Symbol> alphabet() const;

  /// The cyclic word read from position j, length `len`.
  Word read(std::size_t j, std::size_t len) const;

  friend bool operator==(const PeriodicOrbit& a, const PeriodicOrbit& b) { return a.cycle_ == b.cycle_; }
  friend auto operator<=>(const PeriodicOrbit& a, const PeriodicOrbit& b) { return a.cycle_ <=> b.cycle_; }

 private:
  PeriodicOrbit(Word cycle, std::size_t reduced_from) : cycle_(std::move(cycle)), reduced_from_(reduced_from) {}

  Word cycle_;
  std::size_t reduced_from_;
};

/// The invariant probability equidistributed on a periodic orbit.
class PeriodicMeasure {
 public:
  explicit PeriodicMeasure(PeriodicOrbit orbit) : orbit_(std::move(orbit)) {}
  static PeriodicMeasure from_cycle(const ShiftSpec& spec, const Word& cycle) {
    return PeriodicMeasure(PeriodicOrbit::from_cycle(spec, cycle));
  }

  const PeriodicOrbit& orbit() const noexcept { return orbit_; }
  Rational of(const Cylinder& c) const;

  friend bool operator==(const PeriodicMeasure&, const PeriodicMeasure&) = default;
  friend auto operator<=>(const PeriodicMeasure& a, const PeriodicMeasure& b) { return a.orbit_ <=> b.orbit_; }

 private:
  PeriodicOrbit orbit_;
};

PeriodicMeasure periodic_measure(const PeriodicOrbit& orbit);
Rational measure_of_cylinder(const PeriodicMeasure& mu, const Cylinder& c);

/// Finite combination Σ w_j μ_j with w_j in (0, 1] and Σ w_j <= 1. Terms are
/// kept merged and sorted by orbit, so equal measures compare equal. The empty
/// combination is the zero measure.
class ConvexCombination {
 public:
  struct Term {
    Rational weight;
    PeriodicMeasure measure;
    friend bool operator==(const Term&, const Term&) = default;
  };

  ConvexCombination() = default;
  explicit ConvexCombination(std::vector<Term> terms);
  static ConvexCombination single(PeriodicMeasure mu) { return ConvexCombination({{Rational(1), std::move(mu)}}); }
  static ConvexCombination zero() { return {}; }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Rational mass() const;
  Rational of(const Cylinder& c) const;
  /// ν(∪_{s > t} [s]).
  Rational mass_above(Symbol t) const;
  Symbol max_symbol() const noexcept;
  std::vector<Symbol> alphabet() const;

  /// λ·ν for λ in [0, 1].
  ConvexCombination scaled(const Rational& lambda) const;
  /// λ·a + (1 − λ)·b.
  static ConvexCombination mix(const Rational& lambda, const ConvexCombination& a, const ConvexCombination& b);

  friend bool operator==(const ConvexCombination&, const ConvexCombination&) = default;

 private:
  std::vector<Term> terms_;
};

Rational combo_of_cylinder(const ConvexCombination& nu, const Cylinder& c);

struct InvarianceReport {
  std::size_t depth = 0;
  std::size_t cylinders_checked = 0;
  Rational max_defect{0};
  /// Cylinder attaining the maximum, when nonzero.
  std::optional<Cylinder> worst;
};

/// Max |ν(D) − Σ_s ν([sD])| over admissible D of length <= depth that occur
/// in some orbit (all other D have both sides 0). Throws InvalidArgument when
/// symbol_cap does not cover the orbit symbols.
InvarianceReport invariance_check(const ConvexCombination& nu, std::size_t depth, Symbol symbol_cap);

}  // namespace cms
