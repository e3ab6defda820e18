#pragma once

// Roof functions for suspension flows: locally constant at a fixed depth,
// given by a finite table plus a rule in the first symbol for everything else.
// Values are enclosures, so irrational roofs such as log(1 + x_1) are exact up
// to the declared precision.

#include <map>
#include <optional>
#include <string>

#include "cms/numeric.hpp"
#include "cms/orbit.hpp"
#include "cms/shift.hpp"

namespace cms {

struct TailRule {
  enum class Kind { None, Log1p, Constant, Affine };
  Kind kind = Kind::None;
  /// Constant: a. Affine: a + b·x_1.
  Rational a{0};
  Rational b{0};
};

class RoofFunction {
 public:
  RoofFunction(std::size_t depth, std::map<Word, Interval> table, TailRule tail, Rational c, Rational var2_bound,
               unsigned bits = 80, std::string id = "table");

  /// τ(x) = log(1 + x_1), c = the lower end of the enclosure of log 2.
  static RoofFunction log1p(unsigned bits = 80);
  /// τ ≡ v, c = v.
  static RoofFunction constant(const Rational& v);

  std::size_t depth() const noexcept { return depth_; }
  const std::map<Word, Interval>& table() const noexcept { return table_; }
  const TailRule& tail() const noexcept { return tail_; }
  const Rational& c() const noexcept { return c_; }
  const Rational& var2_bound() const noexcept { return var2_; }
  unsigned bits() const noexcept { return bits_; }
  const std::string& id() const noexcept { return id_; }

  /// Throws NotRepresented when the rule is None and no table entry applies.
  Interval tail_value(Symbol first) const;

 private:
  std::size_t depth_;
  std::map<Word, Interval> table_;
  TailRule tail_;
  Rational c_;
  Rational var2_;
  unsigned bits_;
  std::string id_;
};

/// Table value when the depth-k prefix is listed, else the tail rule. A word
/// shorter than k is accepted only when every extension resolves the same way.
Interval roof_eval(const RoofFunction& tau, std::span<const Symbol> w);
inline Interval roof_eval(const RoofFunction& tau, const Word& w) { return roof_eval(tau, w.symbols()); }

struct ClassRReport {
  std::size_t horizon = 0;
  /// τ >= c on every table entry and every tail symbol <= horizon.
  bool c_ok = true;
  std::vector<Word> below_c;
  /// m(k) = inf of tested values with first symbol >= k, k = 1..horizon.
  std::vector<Interval> m;
  bool m_nondecreasing = true;
  /// m grows and m(horizon) certainly exceeds m(ceil(horizon/2)).
  bool condition2 = false;
  bool condition2_vacuous = false;
  /// Locally constant at depth k, so uniformly continuous with var_k = 0.
  bool uniformly_continuous = true;
  /// var_2 read off the table (exact for k <= 2, a lower estimate otherwise).
  Rational var2_measured{0};
  bool var2_ok = true;

  bool passed() const { return c_ok && (condition2 || condition2_vacuous) && var2_ok; }
};

/// alphabet_bound makes condition (2) vacuous.
ClassRReport class_R_check(const RoofFunction& tau, std::size_t horizon,
                           std::optional<Symbol> alphabet_bound = std::nullopt);

/// Σ_{j < T} τ(σ^j p), reading the orbit cyclically.
Interval birkhoff_sum(const RoofFunction& tau, const PeriodicOrbit& orbit);

/// Σ_j w_j · S_{T_j}τ / T_j. Requires mass 1.
Interval roof_integral(const RoofFunction& tau, const ConvexCombination& nu);

/// Parses the roof text format:
///   depth: <k>
///   <word> : <p/q>          (table rows)
///   tail: log1p | const <v> | affine <a> <b> | none
///   c: <p/q>
///   var2: <p/q>
///   bits: <n>
RoofFunction parse_roof_text(std::string_view text);
RoofFunction load_roof_file(const std::string& path);
/// "log1p", "const:<v>", or "@path".
RoofFunction resolve_roof(std::string_view reference, unsigned bits = 80);

}  // namespace cms
