#pragma once

#include <optional>
#include <vector>

#include "cms/numeric.hpp"
#include "cms/orbit.hpp"
#include "cms/shift.hpp"

namespace cms {

/// f = Σ a_i 1_{C_i}, optionally plus v·1 on ∪_{s > t} [s].
class TestFunction {
 public:
  struct Atom {
    Rational coefficient;
    Cylinder cylinder;
  };
  struct Tail {
    Symbol threshold;
    Rational value;
  };

  TestFunction() = default;
  explicit TestFunction(std::vector<Atom> atoms, std::optional<Tail> tail = std::nullopt);
  static TestFunction indicator(const Cylinder& c) { return TestFunction({{Rational(1), c}}); }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::optional<Tail>& tail() const noexcept { return tail_; }
  /// True when there is no tail, i.e. f lies in the span H of indicators.
  bool in_h() const noexcept { return !tail_.has_value(); }
  std::size_t max_depth() const noexcept;

  /// Value at any point whose first symbols are `prefix`; requires
  /// prefix.size() >= max_depth().
  Rational evaluate(std::span<const Symbol> prefix) const;

 private:
  std::vector<Atom> atoms_;
  std::optional<Tail> tail_;
};

/// ∫ f dν, exact. The tail contributes v·ν(∪_{s>t}[s]), which is an exact
/// orbit frequency for periodic components.
Rational integrate_test_function(const TestFunction& f, const ConvexCombination& nu);

struct C0Report {
  std::size_t horizon = 0;
  /// Condition (1): f is locally constant at this depth, hence uniformly continuous.
  std::size_t modulus_depth = 0;
  bool condition1 = true;
  /// Condition (2): sup_{x in [n]} |f(x)| for n = 1..horizon (0 for empty [n]).
  std::vector<Rational> sup_on_symbol;
  Rational condition2_eventual{0};
  bool condition2 = true;
  struct Variation {
    Cylinder cylinder;
    /// var^{C(>=n)}(f) for n = 1..horizon.
    std::vector<Rational> values;
    Rational eventual{0};
  };
  /// Condition (3), one trace per atom cylinder.
  std::vector<Variation> condition3;
  bool condition3_ok = true;

  bool in_closure_of_h() const { return condition1 && condition2 && condition3_ok; }
};

/// Ranges over infinite rows are taken up to the shift's default symbol cap
/// (or horizon + 1 / the largest atom symbol + 1, whichever is larger); a
/// truncated row is assumed to continue.
C0Report c0_conditions_check(const TestFunction& f, const ShiftSpec& spec, std::size_t horizon);

}  // namespace cms
