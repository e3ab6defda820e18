#include "cms/builtins.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "cms/error.hpp"

namespace cms {

namespace {

constexpr Symbol kMaxSymbol = std::numeric_limits<Symbol>::max();

Row prefix_row(Symbol cap) {
  Row row;
  row.symbols.reserve(static_cast<std::size_t>(std::min<Symbol>(cap, 1u << 20)));
  for (Symbol j = 1; j <= cap; ++j) row.symbols.push_back(j);
  row.truncated = true;
  return row;
}

class FullShift final : public ShiftDefinition {
 public:
  std::string name() const override { return "full"; }
  bool allowed(Symbol, Symbol) const override { return true; }
  std::optional<Row> successors_hint(Symbol, Symbol cap) const override { return prefix_row(cap); }
  ShiftTraits traits() const override { return {true, false, false, std::nullopt}; }
};

class FiniteFullShift final : public ShiftDefinition {
 public:
  explicit FiniteFullShift(Symbol m) : m_(m) {}
  std::string name() const override { return "finite_full:" + std::to_string(m_); }
  bool allowed(Symbol i, Symbol j) const override { return i <= m_ && j <= m_; }
  std::optional<Row> successors_hint(Symbol i, Symbol cap) const override {
    Row row;
    row.truncated = false;
    if (i > m_) return row;
    Symbol limit = std::min(cap, m_);
    for (Symbol j = 1; j <= limit; ++j) row.symbols.push_back(j);
    row.truncated = cap < m_;
    return row;
  }
  Symbol symbol_cap_default() const override { return m_; }
  ShiftTraits traits() const override { return {true, true, true, m_}; }
  std::optional<RootLoops> root_loops() const override {
    // First returns to 1 of length k: 1 (self-loop) for k = 1, else (m-1)^(k-1).
    Symbol m = m_;
    return RootLoops{1, [m](std::uint64_t k) -> BigInt {
                       if (k == 0) return 0;
                       if (k == 1) return 1;
                       BigInt r;
                       mpz_ui_pow_ui(r.get_mpz_t(), m - 1, k - 1);
                       return r;
                     }};
  }

 private:
  Symbol m_;
};

class StarShift final : public ShiftDefinition {
 public:
  std::string name() const override { return "star"; }
  bool allowed(Symbol i, Symbol j) const override { return i == 1 || j == 1; }
  std::optional<Row> successors_hint(Symbol i, Symbol cap) const override {
    if (i == 1) return prefix_row(cap);
    return Row{{1}, false};
  }
  ShiftTraits traits() const override { return {true, false, false, std::nullopt}; }
};

class RenewalShift final : public ShiftDefinition {
 public:
  std::string name() const override { return "renewal"; }
  bool allowed(Symbol i, Symbol j) const override { return i == 1 || j + 1 == i; }
  std::optional<Row> successors_hint(Symbol i, Symbol cap) const override {
    if (i == 1) return prefix_row(cap);
    if (i - 1 <= cap) return Row{{i - 1}, false};
    return Row{{}, true};
  }
  ShiftTraits traits() const override { return {true, true, false, std::nullopt}; }
  std::optional<RootLoops> root_loops() const override {
    return RootLoops{1, [](std::uint64_t k) -> BigInt { return k >= 1 ? 1 : 0; }};
  }
};

class LoopFamily final : public ShiftDefinition {
 public:
  LoopFamily(std::function<BigInt(std::uint64_t)> counts, std::string label, std::uint64_t max_length, bool finite)
      : counts_(std::move(counts)), label_(std::move(label)), finite_(finite) {
    BigInt a1 = counts_(1);
    if (a1 < 0) throw InvalidArgument("loop_family: negative count at n=1");
    self_loop_ = a1 >= 1;
    // starts_[t] is the first vertex of the length-(t+1) block; the n = 1 block
    // is empty. A final entry marks the end of the represented range.
    Symbol base = 2;
    starts_.push_back(base);
    per_length_.push_back(0);
    for (std::uint64_t n = 2; n <= max_length; ++n) {
      BigInt a = counts_(n);
      if (a < 0) throw InvalidArgument("loop_family: negative count at n=" + std::to_string(n));
      BigInt block = a * BigInt(static_cast<unsigned long>(n - 1));
      if (BigInt(static_cast<unsigned long>(base)) + block > BigInt(static_cast<unsigned long>(kMaxSymbol))) break;
      per_length_.push_back(a.get_ui());
      starts_.push_back(base);
      base += block.get_ui();
    }
    starts_.push_back(base);
  }

  std::string name() const override { return "loop_family:" + label_; }

  bool allowed(Symbol i, Symbol j) const override {
    if (i == 1) {
      if (j == 1) return self_loop_;
      auto d = decode(j);
      return d && d->pos == 0;
    }
    auto d = decode(i);
    if (!d) return false;
    if (d->pos + 2 == d->length) return j == 1;
    return j == i + 1;
  }

  std::optional<Row> successors_hint(Symbol i, Symbol cap) const override {
    Row row;
    row.truncated = false;
    if (i == 1) {
      if (self_loop_) row.symbols.push_back(1);
      bool beyond = false;
      for (std::size_t t = 1; t < per_length_.size(); ++t) {
        std::uint64_t n = t + 1;
        std::uint64_t a = per_length_[t];
        if (a == 0) continue;
        Symbol start = starts_[t];
        if (start > cap) {
          beyond = true;
          break;
        }
        std::uint64_t fit = (cap - start) / (n - 1) + 1;
        std::uint64_t take = std::min(a, fit);
        for (std::uint64_t l = 0; l < take; ++l) row.symbols.push_back(start + l * (n - 1));
        if (take < a) {
          beyond = true;
          break;
        }
      }
      row.truncated = beyond || !finite_;
      return row;
    }
    auto d = decode(i);
    if (!d) return row;
    Symbol next = (d->pos + 2 == d->length) ? 1 : i + 1;
    if (next <= cap) {
      row.symbols.push_back(next);
    } else {
      row.truncated = true;
    }
    return row;
  }

  Symbol symbol_cap_default() const override { return 4096; }
  ShiftTraits traits() const override { return {true, true, finite_, std::nullopt}; }

  std::optional<RootLoops> root_loops() const override {
    auto counts = counts_;
    bool self = self_loop_;
    return RootLoops{1, [counts, self](std::uint64_t k) -> BigInt {
                       if (k == 0) return 0;
                       if (k == 1) return self ? 1 : 0;
                       return counts(k);
                     }};
  }

 private:
  struct Vertex {
    std::uint64_t length;  // loop length in edges
    std::uint64_t index;   // which loop of that length, 0-based
    std::uint64_t pos;     // position along the chain, 0-based
  };

  std::optional<Vertex> decode(Symbol v) const {
    if (v < 2 || v >= starts_.back()) return std::nullopt;
    auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, v);
    std::size_t t = static_cast<std::size_t>(it - starts_.begin()) - 1;
    std::uint64_t n = t + 1;
    std::uint64_t offset = v - starts_[t];
    return Vertex{n, offset / (n - 1), offset % (n - 1)};
  }

  std::function<BigInt(std::uint64_t)> counts_;
  std::string label_;
  bool finite_;
  bool self_loop_ = false;
  std::vector<std::uint64_t> per_length_;
  std::vector<Symbol> starts_;
};

std::function<BigInt(std::uint64_t)> parse_counts(std::string_view spec, bool& finite, std::uint64_t& max_length) {
  finite = false;
  if (spec == "n") return [](std::uint64_t n) { return BigInt(static_cast<unsigned long>(n)); };
  if (spec == "2^(n^2)" || spec == "2^(n*n)") {
    return [](std::uint64_t n) {
      BigInt r;
      mpz_ui_pow_ui(r.get_mpz_t(), 2, n * n);
      return r;
    };
  }
  if (spec.rfind("const:", 0) == 0) {
    long c = 0;
    try {
      c = std::stol(std::string(spec.substr(6)));
    } catch (const std::exception&) {
      throw InvalidArgument("loop_family: bad constant '" + std::string(spec) + "'");
    }
    if (c <= 0) throw InvalidArgument("loop_family: constant must be positive");
    return [c](std::uint64_t) { return BigInt(c); };
  }
  if (spec.rfind("list:", 0) == 0) {
    std::vector<BigInt> values;
    std::string body(spec.substr(5));
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t comma = body.find(',', pos);
      std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      Rational r = parse_rational(item);
      if (r.get_den() != 1 || r < 0) throw InvalidArgument("loop_family: list entries must be nonnegative integers");
      values.push_back(r.get_num());
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (values.empty()) throw InvalidArgument("loop_family: empty list");
    finite = true;
    max_length = std::min<std::uint64_t>(max_length, values.size());
    return [values](std::uint64_t n) { return n >= 1 && n <= values.size() ? values[n - 1] : BigInt(0); };
  }
  throw InvalidArgument("loop_family: unknown count rule '" + std::string(spec) + "'");
}

}  // namespace

ShiftSpec full_shift() { return ShiftSpec(std::make_shared<FullShift>()); }

ShiftSpec finite_full_shift(Symbol m) {
  if (m == 0) throw InvalidArgument("finite_full: m must be positive");
  return ShiftSpec(std::make_shared<FiniteFullShift>(m));
}

ShiftSpec star_shift() { return ShiftSpec(std::make_shared<StarShift>()); }

ShiftSpec renewal_shift() { return ShiftSpec(std::make_shared<RenewalShift>()); }

ShiftSpec loop_family(std::function<BigInt(std::uint64_t)> counts, std::string label, std::uint64_t max_length) {
  if (!counts) throw InvalidArgument("loop_family: missing count rule");
  if (max_length < 2) throw InvalidArgument("loop_family: max_length must be >= 2");
  return ShiftSpec(std::make_shared<LoopFamily>(std::move(counts), std::move(label), max_length, false));
}

ShiftSpec make_builtin(std::string_view descriptor) {
  std::string_view name = descriptor;
  std::string_view params;
  if (auto colon = descriptor.find(':'); colon != std::string_view::npos) {
    name = descriptor.substr(0, colon);
    params = descriptor.substr(colon + 1);
  }
  if (name == "full" && params.empty()) return full_shift();
  if (name == "star" && params.empty()) return star_shift();
  if (name == "renewal" && params.empty()) return renewal_shift();
  if (name == "finite_full") {
    Rational m;
    try {
      m = parse_rational(params);
    } catch (const InvalidArgument&) {
      throw InvalidArgument("finite_full: parameter m required, got '" + std::string(params) + "'");
    }
    if (m.get_den() != 1 || m <= 0 || !m.get_num().fits_ulong_p()) {
      throw InvalidArgument("finite_full: m must be a positive integer");
    }
    return finite_full_shift(m.get_num().get_ui());
  }
  if (name == "loop_family") {
    if (params.empty()) throw InvalidArgument("loop_family: count rule required");
    bool finite = false;
    std::uint64_t max_length = 65536;
    auto counts = parse_counts(params, finite, max_length);
    if (max_length < 2) max_length = 2;
    return ShiftSpec(std::make_shared<LoopFamily>(std::move(counts), std::string(params), max_length, finite));
  }
  throw InvalidArgument("unknown shift '" + std::string(descriptor) + "'");
}

ShiftSpec resolve_shift(std::string_view reference) {
  if (!reference.empty() && reference.front() == '@') return load_shift_file(std::string(reference.substr(1)));
  return make_builtin(reference);
}

}  // namespace cms
