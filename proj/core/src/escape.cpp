#include "cms/escape.hpp"

#include <algorithm>
#include <unordered_set>

#include "cms/error.hpp"

namespace cms {

namespace {

struct StateHash {
  std::size_t operator()(const std::pair<Symbol, std::size_t>& s) const noexcept {
    return std::hash<Symbol>()(s.first) * 1000003u ^ std::hash<std::size_t>()(s.second);
  }
};

std::vector<Symbol> high_successors_descending(const ShiftSpec& spec, Symbol v, Symbol k, Symbol cap) {
  auto row = spec.successors(v, cap).symbols;
  std::vector<Symbol> out;
  for (auto it = row.rbegin(); it != row.rend(); ++it) {
    if (*it <= k) break;
    out.push_back(*it);
  }
  return out;
}

struct Excursion {
  Symbol start;
  std::vector<Symbol> interior;
  Symbol exit;
};

std::optional<Excursion> find_excursion(const ShiftSpec& spec, Symbol k, std::size_t need, const EscapeCaps& caps,
                                        std::size_t& states) {
  std::unordered_set<std::pair<Symbol, std::size_t>, StateHash> visited;
  struct Frame {
    std::vector<Symbol> next;
    std::size_t idx = 0;
    std::size_t residual = 0;
  };
  auto exit_of = [&](Symbol v) -> std::optional<Symbol> {
    for (Symbol b = 1; b <= k; ++b) {
      if (spec.allowed(v, b)) return b;
    }
    return std::nullopt;
  };

  for (Symbol a = 1; a <= k && a <= caps.symbol_cap; ++a) {
    if (!spec.is_admissible(std::vector<Symbol>{a})) continue;
    std::vector<Symbol> path;
    std::vector<Frame> stack;
    stack.push_back({high_successors_descending(spec, a, k, caps.symbol_cap), 0, need});
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.idx == top.next.size()) {
        stack.pop_back();
        if (!path.empty()) path.pop_back();
        continue;
      }
      Symbol v = top.next[top.idx++];
      std::size_t r = top.residual > 0 ? top.residual - 1 : 0;
      if (!visited.emplace(v, r).second) continue;
      if (++states > caps.max_states) {
        throw SearchExhausted("escape search: state budget " + std::to_string(caps.max_states) + " exhausted for k=" +
                              std::to_string(k));
      }
      path.push_back(v);
      if (r == 0) {
        if (auto b = exit_of(v)) return Excursion{a, path, *b};
      }
      stack.push_back({high_successors_descending(spec, v, k, caps.symbol_cap), 0, r});
    }
  }
  return std::nullopt;
}

}  // namespace

EscapeResult escape_sequence(const ShiftSpec& spec, Symbol k, std::size_t target_len, const EscapeCaps& caps) {
  if (k == 0) throw InvalidArgument("escape_sequence: k must be >= 1");
  if (target_len == 0) throw InvalidArgument("escape_sequence: target_len must be >= 1");
  if (caps.symbol_cap <= k) throw InvalidArgument("escape_sequence: symbol_cap must exceed k");

  // m = interior + 2 >= target_len, with at least one interior symbol.
  const std::size_t need = std::max<std::size_t>(target_len, 3) - 2;
  std::size_t states = 0;
  auto exc = find_excursion(spec, k, need, caps, states);
  if (!exc) {
    throw SearchExhausted("escape search exhausted: no admissible word with endpoints <= " + std::to_string(k) +
                          " and " + std::to_string(need) + " interior symbols in [" + std::to_string(k + 1) + ", " +
                          std::to_string(caps.symbol_cap) + "] (" + std::to_string(states) + " states)");
  }

  std::vector<Symbol> excursion{exc->start};
  excursion.insert(excursion.end(), exc->interior.begin(), exc->interior.end());
  excursion.push_back(exc->exit);

  std::vector<Symbol> cycle(excursion.begin(), excursion.end() - 1);
  std::optional<Word> connector;
  if (exc->exit == exc->start) {
    connector = Word{exc->start};
  } else {
    connector = connect(spec, exc->exit, exc->start, caps.connect_max_len, caps.connect_symbol_cap);
    if (!connector) {
      throw SearchExhausted("escape search: no connecting word from " + std::to_string(exc->exit) + " to " +
                            std::to_string(exc->start) + " within length " + std::to_string(caps.connect_max_len));
    }
    cycle.push_back(exc->exit);
    cycle.insert(cycle.end(), connector->begin() + 1, connector->end() - 1);
  }

  EscapeResult res{PeriodicMeasure::from_cycle(spec, Word(cycle)), k, target_len, Word(std::move(excursion)),
                   *connector, connector->size(), Rational(0), Rational(0), false, states};
  auto nu = ConvexCombination::single(res.measure);
  res.low_mass = nu.mass() - nu.mass_above(k);
  res.bound = Rational(BigInt(static_cast<unsigned long>(res.connector_length + 2)),
                       BigInt(static_cast<unsigned long>(target_len)));
  res.bound.canonicalize();
  res.certified = res.low_mass <= res.bound;
  return res;
}

MeasureSequence escape_measure_sequence(const ShiftSpec& spec, Symbol k, std::size_t step, const EscapeCaps& caps) {
  if (step == 0) throw InvalidArgument("escape_measure_sequence: step must be >= 1");
  return MeasureSequence(
      [spec, k, step, caps](std::size_t n) {
        return ConvexCombination::single(escape_sequence(spec, k, n * step, caps).measure);
      },
      "escape(k=" + std::to_string(k) + ", target_len=" + std::to_string(step) + "n) on " + spec.name());
}

std::vector<PeriodicMeasure> first_return_measures(const ShiftSpec& spec, Symbol i, std::size_t q, std::size_t count,
                                                   Symbol symbol_cap) {
  if (q == 0 || count == 0) throw InvalidArgument("first_return_measures: q and count must be >= 1");
  std::vector<PeriodicMeasure> out;
  if (i == 0 || i > symbol_cap || !spec.is_admissible(std::vector<Symbol>{i})) {
    throw SearchExhausted("first_return_measures: symbol " + std::to_string(i) + " unavailable");
  }
  if (q == 1) {
    if (spec.allowed(i, i)) out.push_back(PeriodicMeasure::from_cycle(spec, Word{i}));
  } else {
    std::vector<Symbol> path{i};
    std::vector<std::pair<std::vector<Symbol>, std::size_t>> stack;
    stack.emplace_back(spec.successors(i, symbol_cap).symbols, 0);
    while (!stack.empty() && out.size() < count) {
      auto& [row, idx] = stack.back();
      if (idx == row.size()) {
        stack.pop_back();
        path.pop_back();
        continue;
      }
      Symbol next = row[idx++];
      if (next == i) continue;
      path.push_back(next);
      if (path.size() == q) {
        if (spec.allowed(next, i)) out.push_back(PeriodicMeasure::from_cycle(spec, Word(path)));
        path.pop_back();
      } else {
        stack.emplace_back(spec.successors(next, symbol_cap).symbols, 0);
      }
    }
  }
  if (out.size() < count) {
    throw SearchExhausted("only " + std::to_string(out.size()) + " first-return loops of length " +
                          std::to_string(q + 1) + " at " + std::to_string(i) + " under symbol cap " +
                          std::to_string(symbol_cap) + ", " + std::to_string(count) + " requested");
  }
  return out;
}

MeasureSequence non_f_witness_sequence(const ShiftSpec& spec, Symbol i, std::size_t q, std::size_t count,
                                       Symbol symbol_cap) {
  auto measures = first_return_measures(spec, i, q, count, symbol_cap);
  std::vector<ConvexCombination> terms;
  terms.reserve(measures.size());
  for (auto& m : measures) terms.push_back(ConvexCombination::single(std::move(m)));
  return MeasureSequence::from_terms(std::move(terms), "first-return loops at " + std::to_string(i) + ", q=" +
                                                           std::to_string(q) + " on " + spec.name());
}

}  // namespace cms
