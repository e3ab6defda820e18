#include "cms/test_function.hpp"

#include <algorithm>
#include <set>

#include "cms/error.hpp"

namespace cms {

namespace {

struct Range {
  Rational lo, hi;
};

void widen(std::optional<Range>& acc, const Range& r) {
  if (!acc) {
    acc = r;
    return;
  }
  if (r.lo < acc->lo) acc->lo = r.lo;
  if (r.hi > acc->hi) acc->hi = r.hi;
}

class RangeFinder {
 public:
  RangeFinder(const TestFunction& f, const ShiftSpec& spec, Symbol cap)
      : f_(f), spec_(spec), cap_(cap), depth_(std::max<std::size_t>(f.max_depth(), f.tail() ? 1 : 0)) {}

  // Value of f on continuations of p that avoid every longer atom.
  Rational base(const std::vector<Symbol>& p) const {
    Rational v(0);
    for (const auto& a : f_.atoms()) {
      if (a.cylinder.size() <= p.size() && std::equal(a.cylinder.begin(), a.cylinder.end(), p.begin())) {
        v += a.coefficient;
      }
    }
    if (f_.tail() && !p.empty() && p.front() > f_.tail()->threshold) v += f_.tail()->value;
    return v;
  }

  std::set<Symbol> atom_continuations(const std::vector<Symbol>& p) const {
    std::set<Symbol> next;
    for (const auto& a : f_.atoms()) {
      if (a.cylinder.size() > p.size() && std::equal(p.begin(), p.end(), a.cylinder.begin())) {
        next.insert(a.cylinder[p.size()]);
      }
    }
    return next;
  }

  // Range of f over [p], assuming p admissible; nullopt for an empty set.
  std::optional<Range> over(std::vector<Symbol>& p) const {
    if (p.size() >= depth_) {
      Rational v = base(p);
      return Range{v, v};
    }
    return over_children(p, 1);
  }

  // Range of f over continuations p·s with s >= min_next.
  std::optional<Range> over_children(std::vector<Symbol>& p, Symbol min_next) const {
    std::optional<Range> acc;
    auto next = atom_continuations(p);
    for (Symbol s : next) {
      if (s < min_next || !spec_.allowed(p.back(), s)) continue;
      p.push_back(s);
      if (spec_.is_admissible(std::span<const Symbol>(p.data() + p.size() - 1, 1))) {
        if (auto r = over(p)) widen(acc, *r);
      }
      p.pop_back();
    }
    Row row = spec_.successors(p.back(), std::max(cap_, min_next));
    bool other = row.truncated;
    for (Symbol s : row.symbols) {
      if (s >= min_next && !next.count(s)) {
        other = true;
        break;
      }
    }
    if (other) {
      Rational v = base(p);
      widen(acc, Range{v, v});
    }
    return acc;
  }

 private:
  const TestFunction& f_;
  const ShiftSpec& spec_;
  Symbol cap_;
  std::size_t depth_;
};

}  // namespace

TestFunction::TestFunction(std::vector<Atom> atoms, std::optional<Tail> tail)
    : atoms_(std::move(atoms)), tail_(std::move(tail)) {}

std::size_t TestFunction::max_depth() const noexcept {
  std::size_t d = 0;
  for (const auto& a : atoms_) d = std::max(d, a.cylinder.size());
  return d;
}

Rational TestFunction::evaluate(std::span<const Symbol> prefix) const {
  if (prefix.size() < std::max<std::size_t>(max_depth(), 1)) {
    throw InvalidArgument("evaluate: prefix shorter than the function's depth");
  }
  Rational v(0);
  for (const auto& a : atoms_) {
    if (std::equal(a.cylinder.begin(), a.cylinder.end(), prefix.begin())) v += a.coefficient;
  }
  if (tail_ && prefix.front() > tail_->threshold) v += tail_->value;
  return v;
}

Rational integrate_test_function(const TestFunction& f, const ConvexCombination& nu) {
  Rational total(0);
  for (const auto& a : f.atoms()) total += a.coefficient * nu.of(a.cylinder);
  if (f.tail()) total += f.tail()->value * nu.mass_above(f.tail()->threshold);
  return total;
}

C0Report c0_conditions_check(const TestFunction& f, const ShiftSpec& spec, std::size_t horizon) {
  if (horizon == 0) throw InvalidArgument("c0_conditions_check: horizon must be >= 1");
  Symbol cap = std::max<Symbol>(spec.symbol_cap_default(), horizon + 1);
  for (const auto& a : f.atoms()) cap = std::max<Symbol>(cap, a.cylinder.max_symbol() + 1);
  if (f.tail()) cap = std::max<Symbol>(cap, f.tail()->threshold + 1);
  RangeFinder finder(f, spec, cap);

  C0Report rep;
  rep.horizon = horizon;
  rep.modulus_depth = std::max<std::size_t>(f.max_depth(), f.tail() ? 1 : 0);
  rep.condition1 = true;

  for (Symbol n = 1; n <= horizon; ++n) {
    std::vector<Symbol> p{n};
    Rational sup(0);
    if (spec.is_admissible(p)) {
      if (auto r = finder.over(p)) sup = std::max(abs(r->lo), abs(r->hi));
    }
    rep.sup_on_symbol.push_back(sup);
  }
  bool infinite_alphabet = !spec.traits().alphabet_bound.has_value();
  rep.condition2_eventual = (infinite_alphabet && f.tail()) ? abs(f.tail()->value) : Rational(0);
  rep.condition2 = rep.condition2_eventual == 0;

  std::set<Word> seen;
  for (const auto& a : f.atoms()) {
    if (!seen.insert(a.cylinder).second) continue;
    C0Report::Variation var{a.cylinder, {}, Rational(0)};
    bool admissible = spec.is_admissible(a.cylinder);
    for (Symbol n = 1; n <= horizon; ++n) {
      Rational v(0);
      if (admissible) {
        std::vector<Symbol> p(a.cylinder.begin(), a.cylinder.end());
        if (auto r = finder.over_children(p, n)) v = r->hi - r->lo;
      }
      var.values.push_back(v);
    }
    rep.condition3.push_back(std::move(var));
  }
  rep.condition3_ok = true;
  return rep;
}

}  // namespace cms
