#pragma once

// Countable Markov shifts over the positive integers, given by a lazy
// transition oracle B(i, j). Every search takes explicit symbol caps since
// rows may be infinite.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cms/numeric.hpp"
#include "cms/word.hpp"

namespace cms {

/// Successors of a symbol up to a cap, ascending. `truncated` means the row
/// may continue past the cap.
struct Row {
  std::vector<Symbol> symbols;
  bool truncated = true;
};

/// Declared, not verified.
struct ShiftTraits {
  bool transitive = false;
  bool f_property = false;
  bool locally_compact = false;
  /// Set when the alphabet is {1..bound}.
  std::optional<Symbol> alphabet_bound;
};

/// Closed-form first-return loop counts at a root symbol, when a built-in
/// knows them: f(k) = number of first-return loops of length k (k edges).
struct RootLoops {
  Symbol root = 1;
  std::function<BigInt(std::uint64_t)> first_return_count;
};

class ShiftDefinition {
 public:
  virtual ~ShiftDefinition() = default;

  virtual std::string name() const = 0;
  virtual bool allowed(Symbol i, Symbol j) const = 0;
  /// Optional fast path; must agree with `allowed`.
  virtual std::optional<Row> successors_hint(Symbol /*i*/, Symbol /*cap*/) const { return std::nullopt; }
  virtual Symbol symbol_cap_default() const { return 64; }
  virtual ShiftTraits traits() const { return {}; }
  virtual std::optional<RootLoops> root_loops() const { return std::nullopt; }
};

/// Shared immutable handle to a shift definition. Cheap to copy.
class ShiftSpec {
 public:
  explicit ShiftSpec(std::shared_ptr<const ShiftDefinition> def);

  std::string name() const { return def_->name(); }
  bool allowed(Symbol i, Symbol j) const;
  Symbol symbol_cap_default() const { return def_->symbol_cap_default(); }
  ShiftTraits traits() const { return def_->traits(); }
  std::optional<RootLoops> root_loops() const { return def_->root_loops(); }
  const ShiftDefinition& definition() const noexcept { return *def_; }

  /// All j <= cap with B(i, j) = 1, ascending. Falls back to a scan of
  /// 1..cap when the definition has no hint.
  Row successors(Symbol i, Symbol cap) const;

  bool is_admissible(std::span<const Symbol> symbols) const;
  bool is_admissible(const Word& w) const { return is_admissible(w.symbols()); }
  /// Admissible and B(last, first) = 1.
  bool closes_up(const Word& w) const;

 private:
  std::shared_ptr<const ShiftDefinition> def_;
};

/// Throws InvalidArgument on an empty sequence.
bool is_admissible(const ShiftSpec& spec, std::span<const Symbol> symbols);
Row successors(const ShiftSpec& spec, Symbol i, Symbol cap);

/// Shortest, then lexicographically least, admissible word from a to b with at
/// most max_len symbols, all <= symbol_cap. connect(a, a) is the one-symbol
/// word (a).
std::optional<Word> connect(const ShiftSpec& spec, Symbol a, Symbol b, std::size_t max_len, Symbol symbol_cap);

struct LoopList {
  std::vector<Word> loops;
  bool saturated = false;
};

/// Words (x_1..x_n) with x_1 = a and B(x_n, a) = 1, lexicographic order.
LoopList enumerate_loops(const ShiftSpec& spec, Symbol a, std::size_t n, std::size_t cap, Symbol symbol_cap);

struct FProbe {
  enum class Kind { FiniteCount, AtLeast };
  Kind kind = Kind::AtLeast;
  std::uint64_t count = 0;
  /// Some row on an explored branch was cut at symbol_cap.
  bool truncated = false;
};

/// Counts admissible words of length n (symbols) that start and end at i.
FProbe f_property_probe(const ShiftSpec& spec, Symbol i, std::size_t n, std::uint64_t cap, Symbol symbol_cap);

struct StructureReport {
  Symbol horizon = 0;
  Symbol symbol_cap = 0;
  std::vector<Symbol> empty_rows;
  std::vector<Symbol> empty_columns;
  /// Symbols i <= horizon not connected to and from symbol 1 within the caps.
  std::vector<Symbol> unreachable;
  bool ok() const { return empty_rows.empty() && empty_columns.empty() && unreachable.empty(); }
};

/// Best-effort truncated check of the standing assumptions: nonempty rows and
/// columns, and two-way reachability to symbol 1.
StructureReport check_structure(const ShiftSpec& spec, Symbol horizon, Symbol symbol_cap, std::size_t max_len);

}  // namespace cms
