#include "cms/entropy.hpp"

#include <map>

#include "cms/error.hpp"

namespace cms {

namespace {

std::vector<std::pair<BigInt, bool>> counts_by_dp(const ShiftSpec& spec, Symbol a, std::size_t n_hi,
                                                  Symbol symbol_cap) {
  std::vector<std::pair<BigInt, bool>> out;
  std::map<Symbol, BigInt> v{{a, BigInt(1)}};
  bool truncated = false;
  std::map<Symbol, Row> rows;
  auto row_of = [&](Symbol s) -> const Row& {
    auto it = rows.find(s);
    if (it == rows.end()) it = rows.emplace(s, spec.successors(s, symbol_cap)).first;
    return it->second;
  };
  for (std::size_t t = 1; t <= n_hi; ++t) {
    BigInt z = 0;
    for (const auto& [i, c] : v) {
      if (spec.allowed(i, a)) z += c;
    }
    out.emplace_back(z, truncated);
    if (t == n_hi) break;
    std::map<Symbol, BigInt> next;
    for (const auto& [i, c] : v) {
      const Row& row = row_of(i);
      truncated = truncated || row.truncated;
      for (Symbol j : row.symbols) next[j] += c;
    }
    v = std::move(next);
  }
  return out;
}

std::vector<std::pair<BigInt, bool>> counts_by_renewal(const RootLoops& loops, std::size_t n_hi) {
  std::vector<BigInt> f(n_hi + 1), z(n_hi + 1);
  for (std::size_t k = 1; k <= n_hi; ++k) f[k] = loops.first_return_count(k);
  z[0] = 1;
  std::vector<std::pair<BigInt, bool>> out;
  for (std::size_t n = 1; n <= n_hi; ++n) {
    for (std::size_t k = 1; k <= n; ++k) z[n] += f[k] * z[n - k];
    out.emplace_back(z[n], false);
  }
  return out;
}

}  // namespace

EntropyReport gurevich_entropy_estimate(const ShiftSpec& spec, Symbol a, std::size_t n_lo, std::size_t n_hi,
                                        Symbol symbol_cap, const EntropyOptions& options) {
  if (n_lo == 0 || n_hi < n_lo) throw InvalidArgument("entropy: need 1 <= n_lo <= n_hi");
  if (a == 0 || symbol_cap == 0) throw InvalidArgument("entropy: symbol and cap must be positive");
  EntropyReport rep;
  rep.a = a;
  rep.symbol_cap = symbol_cap;
  rep.bits = options.bits;

  std::vector<std::pair<BigInt, bool>> counts;
  auto loops = spec.root_loops();
  if (options.use_root_loops && loops && loops->root == a) {
    rep.used_root_loops = true;
    counts = counts_by_renewal(*loops, n_hi);
  } else {
    counts = counts_by_dp(spec, a, n_hi, symbol_cap);
  }

  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    EntropyRow row;
    row.n = n;
    row.loops = counts[n - 1].first;
    row.truncated = counts[n - 1].second;
    if (row.loops > 0) row.estimate = log_ratio_interval(row.loops, n, options.bits);
    rep.rows.push_back(std::move(row));
  }
  std::optional<Interval> sup;
  for (auto it = rep.rows.rbegin(); it != rep.rows.rend(); ++it) {
    if (it->estimate) {
      sup = sup ? Interval(std::max(sup->lo(), it->estimate->lo()), std::max(sup->hi(), it->estimate->hi()))
                : *it->estimate;
    }
    it->tail_sup = sup;
  }
  return rep;
}

}  // namespace cms
