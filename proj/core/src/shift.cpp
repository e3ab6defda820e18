#include "cms/shift.hpp"

#include <algorithm>
#include <unordered_map>

#include "cms/error.hpp"

namespace cms {

ShiftSpec::ShiftSpec(std::shared_ptr<const ShiftDefinition> def) : def_(std::move(def)) {
  if (!def_) throw InvalidArgument("null shift definition");
}

bool ShiftSpec::allowed(Symbol i, Symbol j) const {
  if (i == 0 || j == 0) return false;
  return def_->allowed(i, j);
}

Row ShiftSpec::successors(Symbol i, Symbol cap) const {
  if (cap == 0) throw InvalidArgument("successors: cap must be >= 1");
  if (auto hint = def_->successors_hint(i, cap)) return *hint;
  Row row;
  Symbol limit = cap;
  auto bound = def_->traits().alphabet_bound;
  if (bound && *bound <= cap) {
    limit = *bound;
    row.truncated = false;
  }
  for (Symbol j = 1; j <= limit; ++j) {
    if (def_->allowed(i, j)) row.symbols.push_back(j);
  }
  return row;
}

bool ShiftSpec::is_admissible(std::span<const Symbol> symbols) const {
  if (symbols.empty()) throw InvalidArgument("is_admissible: empty symbol sequence");
  if (std::find(symbols.begin(), symbols.end(), Symbol{0}) != symbols.end()) return false;
  for (std::size_t t = 0; t + 1 < symbols.size(); ++t) {
    if (!allowed(symbols[t], symbols[t + 1])) return false;
  }
  if (auto bound = def_->traits().alphabet_bound) {
    for (Symbol s : symbols) {
      if (s > *bound) return false;
    }
  }
  return true;
}

bool ShiftSpec::closes_up(const Word& w) const { return is_admissible(w) && allowed(w.back(), w.front()); }

bool is_admissible(const ShiftSpec& spec, std::span<const Symbol> symbols) { return spec.is_admissible(symbols); }

Row successors(const ShiftSpec& spec, Symbol i, Symbol cap) { return spec.successors(i, cap); }

std::optional<Word> connect(const ShiftSpec& spec, Symbol a, Symbol b, std::size_t max_len, Symbol symbol_cap) {
  if (a == 0 || b == 0 || a > symbol_cap || b > symbol_cap) return std::nullopt;
  if (a == b) {
    if (!spec.is_admissible(std::vector<Symbol>{a})) return std::nullopt;
    return Word{a};
  }
  std::unordered_map<Symbol, Symbol> parent;
  parent.emplace(a, 0);
  auto path_to = [&](Symbol v) {
    std::vector<Symbol> p;
    for (Symbol x = v; x != 0; x = parent.at(x)) p.push_back(x);
    std::reverse(p.begin(), p.end());
    return p;
  };

  std::vector<Symbol> frontier{a};
  for (std::size_t len = 1; len < max_len && !frontier.empty(); ++len) {
    for (Symbol u : frontier) {
      if (spec.allowed(u, b)) {
        auto p = path_to(u);
        p.push_back(b);
        return Word(std::move(p));
      }
    }
    if (len + 1 >= max_len) break;
    std::vector<Symbol> next;
    for (Symbol u : frontier) {
      for (Symbol v : spec.successors(u, symbol_cap).symbols) {
        if (parent.emplace(v, u).second) next.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

LoopList enumerate_loops(const ShiftSpec& spec, Symbol a, std::size_t n, std::size_t cap, Symbol symbol_cap) {
  if (n == 0) throw InvalidArgument("enumerate_loops: n must be >= 1");
  LoopList out;
  if (a == 0 || a > symbol_cap || cap == 0) {
    out.saturated = cap == 0;
    return out;
  }
  if (!spec.is_admissible(std::vector<Symbol>{a})) return out;

  std::vector<Symbol> path{a};
  std::vector<std::pair<std::vector<Symbol>, std::size_t>> stack;
  auto emit_if_closed = [&] {
    if (spec.allowed(path.back(), a)) out.loops.emplace_back(path);
    return out.loops.size() >= cap;
  };
  if (n == 1) {
    out.saturated = emit_if_closed();
    return out;
  }
  stack.emplace_back(spec.successors(a, symbol_cap).symbols, 0);
  while (!stack.empty()) {
    auto& [row, idx] = stack.back();
    if (idx == row.size()) {
      stack.pop_back();
      path.pop_back();
      continue;
    }
    Symbol next = row[idx++];
    path.push_back(next);
    if (path.size() == n) {
      if (emit_if_closed()) {
        out.saturated = true;
        return out;
      }
      path.pop_back();
    } else {
      stack.emplace_back(spec.successors(next, symbol_cap).symbols, 0);
    }
  }
  return out;
}

FProbe f_property_probe(const ShiftSpec& spec, Symbol i, std::size_t n, std::uint64_t cap, Symbol symbol_cap) {
  if (n < 2) throw InvalidArgument("f_property_probe: n must be >= 2");
  if (cap == 0) throw InvalidArgument("f_property_probe: cap must be >= 1");
  FProbe probe;
  auto finish = [&] {
    probe.kind = (probe.truncated || probe.count >= cap) ? FProbe::Kind::AtLeast : FProbe::Kind::FiniteCount;
    return probe;
  };
  if (i == 0 || i > symbol_cap) return finish();
  if (n == 2) {
    probe.count = spec.allowed(i, i) ? 1 : 0;
    return finish();
  }
  if (auto loops = spec.root_loops(); loops && loops->root == i) {
    // Words i ... i of n symbols are concatenations of first-return loops
    // with n - 1 edges in total: Z_m = Σ_k f_k Z_{m-k}.
    std::vector<BigInt> z(n, 0);
    z[0] = 1;
    for (std::size_t m = 1; m < n; ++m) {
      for (std::size_t k = 1; k <= m; ++k) z[m] += loops->first_return_count(k) * z[m - k];
    }
    probe.count = z[n - 1] >= cap ? cap : z[n - 1].get_ui();
    return finish();
  }
  // Positions 1..n-2 are free; the last symbol is forced to i.
  std::vector<Symbol> path{i};
  std::vector<std::pair<std::vector<Symbol>, std::size_t>> stack;
  auto push_row = [&](Symbol s) {
    Row row = spec.successors(s, symbol_cap);
    probe.truncated = probe.truncated || row.truncated;
    stack.emplace_back(std::move(row.symbols), 0);
  };
  push_row(i);
  while (!stack.empty()) {
    auto& [row, idx] = stack.back();
    if (idx == row.size()) {
      stack.pop_back();
      path.pop_back();
      continue;
    }
    Symbol next = row[idx++];
    path.push_back(next);
    if (path.size() == n - 1) {
      if (spec.allowed(next, i) && ++probe.count >= cap) return finish();
      path.pop_back();
    } else {
      push_row(next);
    }
  }
  return finish();
}

StructureReport check_structure(const ShiftSpec& spec, Symbol horizon, Symbol symbol_cap, std::size_t max_len) {
  StructureReport rep;
  rep.horizon = horizon;
  rep.symbol_cap = symbol_cap;
  Symbol limit = horizon;
  if (auto bound = spec.traits().alphabet_bound) limit = std::min(limit, *bound);
  for (Symbol i = 1; i <= limit; ++i) {
    if (spec.successors(i, symbol_cap).symbols.empty()) rep.empty_rows.push_back(i);
    bool has_pred = false;
    for (Symbol k = 1; k <= symbol_cap && !has_pred; ++k) has_pred = spec.allowed(k, i);
    if (!has_pred) rep.empty_columns.push_back(i);
    if (i > 1 && (!connect(spec, 1, i, max_len, symbol_cap) || !connect(spec, i, 1, max_len, symbol_cap))) {
      rep.unreachable.push_back(i);
    }
  }
  return rep;
}

}  // namespace cms
