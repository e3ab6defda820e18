#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cms {

using Symbol = std::uint64_t;

/// Nonempty finite string over the positive integers. Admissibility is a
/// property relative to a shift and is checked by the shift, not here.
class Word {
 public:
  Word(std::initializer_list<Symbol> symbols);
  explicit Word(std::vector<Symbol> symbols);

  /// Accepts "1 2 3", "1,2,3" and "(1,2,3)".
  static Word parse(std::string_view text);

  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  const std::vector<Symbol>& vec() const noexcept { return symbols_; }
  auto begin() const noexcept { return symbols_.begin(); }
  auto end() const noexcept { return symbols_.end(); }

  /// Σ symbols; equals length + Σ(symbol − 1). Saturates at UINT64_MAX.
  std::uint64_t weight() const noexcept;
  Symbol max_symbol() const noexcept;

  Word prefix(std::size_t n) const;
  Word appended(Symbol s) const;
  Word concat(const Word& tail) const;

  bool starts_with(std::span<const Symbol> prefix) const noexcept;

  /// "(1,2,3)".
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.symbols_ <=> b.symbols_; }

 private:
  std::vector<Symbol> symbols_;
};

/// A cylinder [a_1 ... a_n] is identified with its defining word.
using Cylinder = Word;

/// Order of the cylinder enumeration: weight, then length, then lexicographic.
bool canonical_less(const Word& a, const Word& b) noexcept;

}  // namespace cms
