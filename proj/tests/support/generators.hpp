#pragma once
// Seeded generators for property tests.

#include <optional>
#include <random>
#include <vector>

#include "cms/builtins.hpp"
#include "cms/orbit.hpp"

namespace gen {

using cms::Rational;
using cms::Symbol;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return below(2) == 1; }

  // Random walk with a closing edge back to the start; retries on dead ends.
  std::vector<Symbol> cycle(const cms::ShiftSpec& spec, std::size_t max_period, Symbol cap) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::size_t T = between(1, max_period);
      std::vector<Symbol> w{between(1, cap)};
      while (w.size() < T) {
        auto row = spec.successors(w.back(), cap).symbols;
        if (row.empty()) break;
        w.push_back(row[below(row.size())]);
      }
      if (w.size() == T && spec.allowed(w.back(), w.front())) return w;
    }
    return {1};
  }

  cms::PeriodicMeasure measure(const cms::ShiftSpec& spec, std::size_t max_period, Symbol cap) {
    return cms::PeriodicMeasure::from_cycle(spec, cms::Word(cycle(spec, max_period, cap)));
  }

  // Weights with small denominators summing to `mass`.
  cms::ConvexCombination combination(const cms::ShiftSpec& spec, std::size_t terms, std::size_t max_period, Symbol cap,
                                     Rational mass = 1) {
    std::vector<std::uint64_t> parts(terms);
    std::uint64_t total = 0;
    for (auto& p : parts) total += (p = between(1, 6));
    std::vector<cms::ConvexCombination::Term> out;
    for (auto p : parts) {
      Rational share(cms::BigInt(static_cast<unsigned long>(p)), cms::BigInt(static_cast<unsigned long>(total)));
      share.canonicalize();
      out.push_back({mass * share, measure(spec, max_period, cap)});
    }
    return cms::ConvexCombination(std::move(out));
  }

  // A text shift on 1..m with a random 0/1 matrix; every row keeps at least one edge.
  cms::ShiftSpec text_shift(Symbol m) {
    std::string text = "alphabet: " + std::to_string(m) + "\ndefault: none\n";
    for (Symbol i = 1; i <= m; ++i) {
      text += std::to_string(i) + ":";
      bool any = false;
      for (Symbol j = 1; j <= m; ++j) {
        if (below(3) == 0 || (j == m && !any)) {
          text += " " + std::to_string(j);
          any = true;
        }
      }
      text += "\n";
    }
    return cms::parse_shift_text(text);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
