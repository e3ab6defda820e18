#pragma once

#include <optional>
#include <vector>

#include "cms/metric.hpp"
#include "cms/roof.hpp"

namespace cms {

struct DensuspCaps {
  /// Metric depth; 0 selects ceil(log2(2/ε)).
  std::size_t n_terms = 0;
  std::size_t max_period = 1u << 22;
  std::size_t connect_max_len = 32;
  Symbol connect_symbol_cap = 1024;
};

struct DensuspResult {
  PeriodicMeasure measure;
  /// The cyclic word before reduction to its least rotation.
  Word word;
  /// Σ_j r_j·T_j; r_j = w_j·R / T_j.
  BigInt R{0};
  std::vector<BigInt> repetitions;
  /// Interiors of the joining words, one per component (possibly empty).
  std::vector<std::vector<Symbol>> connectors;
  std::size_t n_terms = 0;
  DistanceBracket distance;
  /// Enclosure of |∫τ dμ_x − ∫τ d(target)|.
  Interval integral_gap;
  Interval integral;
  bool converged = false;
  std::size_t doublings = 0;
};

/// One periodic orbit approximating a rational combination of periodic
/// measures: component words repeated r_j times, joined by connecting words,
/// with R doubled until metric_d(μ_x, target, N).upper <= ε and the roof
/// integral gap is <= ε. When the period cap is reached first, the best
/// attempt is returned with converged = false. A single-term target is
/// returned unchanged.
DensuspResult densusp_approximate(const ConvexCombination& target, const RoofFunction& tau, const Rational& eps,
                                  const ShiftSpec& spec, const DensuspCaps& caps = {});

}  // namespace cms
