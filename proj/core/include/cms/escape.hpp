#pragma once

#include "cms/limits.hpp"
#include "cms/orbit.hpp"
#include "cms/shift.hpp"

namespace cms {

struct EscapeCaps {
  /// Interior symbols are drawn from k+1..symbol_cap.
  Symbol symbol_cap = 1024;
  /// Caps for closing the excursion with connect().
  std::size_t connect_max_len = 32;
  Symbol connect_symbol_cap = 1024;
  /// Budget of (symbol, residual) states for the interior search.
  std::size_t max_states = 2'000'000;
};

struct EscapeResult {
  PeriodicMeasure measure;
  std::size_t k = 0;
  std::size_t target_len = 0;
  /// a_1 ... a_m: endpoints <= k, interior >= k+1, m >= target_len.
  Word excursion;
  /// connect(a_m, a_1); a single symbol when a_m == a_1.
  Word connector;
  /// M_0, the connector length in symbols.
  std::size_t connector_length = 0;
  /// ν(∪_{s <= k} [s]) from occurrence counts.
  Rational low_mass{0};
  /// (M_0 + 2) / target_len.
  Rational bound{0};
  bool certified = false;
  std::size_t states_explored = 0;
};

/// Builds a periodic measure that spends little time on symbols <= k: a long
/// excursion through symbols >= k+1, closed up by a connecting word. The
/// interior search is a depth-first walk trying larger successors first, with a
/// visited set on (symbol, remaining length). Throws SearchExhausted when no
/// excursion exists within the caps (e.g. the star shift with k = 1).
EscapeResult escape_sequence(const ShiftSpec& spec, Symbol k, std::size_t target_len, const EscapeCaps& caps);

/// The sequence n ↦ escape_sequence(spec, k, n·step) as single measures.
MeasureSequence escape_measure_sequence(const ShiftSpec& spec, Symbol k, std::size_t step, const EscapeCaps& caps);

/// First-return loops (i, x_2, ..., x_q, i) of q+1 symbols with x_t != i, in
/// lexicographic order; each yields μ([i]) = 1/q. Throws SearchExhausted when
/// fewer than `count` exist under symbol_cap.
std::vector<PeriodicMeasure> first_return_measures(const ShiftSpec& spec, Symbol i, std::size_t q, std::size_t count,
                                                   Symbol symbol_cap);

/// Sequence over first_return_measures; term n is the n-th loop.
MeasureSequence non_f_witness_sequence(const ShiftSpec& spec, Symbol i, std::size_t q, std::size_t count,
                                       Symbol symbol_cap);

}  // namespace cms
