#pragma once

#include <optional>
#include <vector>

#include "cms/numeric.hpp"
#include "cms/shift.hpp"

namespace cms {

struct EntropyRow {
  std::size_t n = 0;
  /// Z_n(a): periodic points of period n in [a], i.e. loops of n symbols at a.
  BigInt loops{0};
  /// Some row in the count was cut at the symbol cap, so `loops` is a lower bound.
  bool truncated = false;
  /// (1/n) log Z_n(a); absent when Z_n(a) = 0.
  std::optional<Interval> estimate;
  /// Enclosure of sup_{m >= n} estimate_m over the computed range.
  std::optional<Interval> tail_sup;
};

struct EntropyReport {
  Symbol a = 1;
  Symbol symbol_cap = 0;
  unsigned bits = 80;
  /// Counts came from the renewal recursion on known first-return counts.
  bool used_root_loops = false;
  std::vector<EntropyRow> rows;
};

struct EntropyOptions {
  unsigned bits = 80;
  /// Use Z_n = Σ_k f_k Z_{n−k} when the shift publishes first-return counts at a.
  bool use_root_loops = true;
};

/// Loop counts by sparse big-integer dynamic programming over symbols <=
/// symbol_cap, for n in [n_lo, n_hi].
EntropyReport gurevich_entropy_estimate(const ShiftSpec& spec, Symbol a, std::size_t n_lo, std::size_t n_hi,
                                        Symbol symbol_cap, const EntropyOptions& options = {});

}  // namespace cms
