#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cms/cylinder_function.hpp"
#include "cms/orbit.hpp"
#include "cms/test_function.hpp"

namespace cms {

/// n ↦ ν_n for n = 1, 2, ...
class MeasureSequence {
 public:
  using Generator = std::function<ConvexCombination(std::size_t)>;

  MeasureSequence(Generator generator, std::string description);

  /// Throws GeneratorFailure (carrying n) if the generator fails.
  ConvexCombination at(std::size_t n) const;
  const std::string& description() const noexcept { return description_; }

  static MeasureSequence constant(ConvexCombination nu);
  /// Terms from a list; indices past the end raise GeneratorFailure.
  static MeasureSequence from_terms(std::vector<ConvexCombination> terms, std::string description);
  /// n ↦ λ·base + (1 − λ)·ν_n.
  MeasureSequence mixed(const Rational& lambda, const ConvexCombination& base) const;

 private:
  Generator gen_;
  std::string description_;
};

enum class LimitClass { Probability, SubProbability, Defective, Undetermined };

std::string to_string(LimitClass c);

struct DefectSite {
  Cylinder cylinder;
  Rational defect;
};

struct CylinderTrace {
  Cylinder cylinder;
  /// values[j] is the value at sequence index first_index + j.
  std::size_t first_index = 1;
  std::vector<Rational> values;
  /// max − min over the oscillation window.
  Rational oscillation{0};
};

struct LimitOptions {
  /// Cylinders to trace; when empty, the depth-1 cylinders [1..min(cap, 8)]
  /// plus up to 32 nonzero final-table entries are traced.
  std::vector<Cylinder> trace_cylinders;
  /// Trace every index 1..n_max rather than just the window.
  bool full_traces = true;
};

struct LimitReport {
  std::size_t depth = 0;
  Symbol symbol_cap = 0;
  std::size_t n_max = 0;
  Rational tol{0};
  std::size_t window_start = 0;

  CylinderFunction limit_table;
  /// Σ_{s <= cap} F([s]); the true mass lies in [mass_lower, mass_upper].
  Rational mass_lower{0};
  Rational mass_upper{1};
  LimitClass classification = LimitClass::Undetermined;
  std::vector<DefectSite> defects;

  Rational max_oscillation{0};
  std::optional<Cylinder> worst_cylinder;
  std::vector<CylinderTrace> traces;
};

/// Tabulates every term of the window (last ceil(n_max/4) indices) at depths
/// 1..depth and symbols <= symbol_cap, and measures per-cylinder oscillation.
/// The final term's table is the candidate limit.
LimitReport cylinder_limit(const MeasureSequence& seq, std::size_t depth, Symbol symbol_cap, std::size_t n_max,
                           const Rational& tol, const LimitOptions& options = {});

/// Defective if δ_K(C) > tol for a represented C (K clipped to the child
/// depth's cap), else Probability if |1 − mass| <= tol, else SubProbability.
/// Fills report.defects as a side effect of the returned classification.
LimitClass classify_limit(LimitReport& report, Symbol k_max, const Rational& tol);

/// ∫ f dν_n for n = 1..n_max, one row per function.
std::vector<std::vector<Rational>> weak_star_trace(const MeasureSequence& seq, const std::vector<TestFunction>& fs,
                                                   std::size_t n_max);

}  // namespace cms
