#include "cms/orbit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cms/error.hpp"

namespace cms {

namespace {

std::size_t primitive_period(const std::vector<Symbol>& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && s[i] != s[k]) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  std::size_t p = n - pi[n - 1];
  return n % p == 0 ? p : n;
}

// Booth's algorithm: start index of the lexicographically least rotation.
std::size_t least_rotation(const std::vector<Symbol>& s) {
  const std::size_t n = s.size();
  std::vector<Symbol> ss(s);
  ss.insert(ss.end(), s.begin(), s.end());
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Symbol sj = ss[j];
    long i = f[j - k - 1];
    while (i != -1 && sj != ss[k + static_cast<std::size_t>(i) + 1]) {
      if (sj < ss[k + static_cast<std::size_t>(i) + 1]) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (sj != ss[k + static_cast<std::size_t>(i) + 1]) {
      if (sj < ss[k]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

}  // namespace

PeriodicOrbit PeriodicOrbit::from_cycle(const ShiftSpec& spec, const Word& cycle) {
  if (!spec.is_admissible(cycle)) throw InvalidArgument("cycle " + cycle.to_string() + " is not admissible");
  if (!spec.allowed(cycle.back(), cycle.front())) {
    throw InvalidArgument("cycle " + cycle.to_string() + " does not close up");
  }
  const auto& s = cycle.vec();
  std::size_t p = primitive_period(s);
  std::vector<Symbol> root(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(p));
  std::size_t r = least_rotation(root);
  std::rotate(root.begin(), root.begin() + static_cast<std::ptrdiff_t>(r), root.end());
  return PeriodicOrbit(Word(std::move(root)), s.size());
}

std::uint64_t PeriodicOrbit::occurrences(std::span<const Symbol> w) const {
  const auto& s = cycle_.vec();
  const std::size_t n = s.size();
  std::uint64_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    bool match = true;
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (s[(j + t) % n] != w[t]) {
        match = false;
        break;
      }
    }
    count += match;
  }
  return count;
}

std::uint64_t PeriodicOrbit::count_above(Symbol t) const {
  return static_cast<std::uint64_t>(std::count_if(cycle_.begin(), cycle_.end(), [t](Symbol s) { return s > t; }));
}

std::vector<Symbol> PeriodicOrbit::alphabet() const {
  std::vector<Symbol> a(cycle_.begin(), cycle_.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

Word PeriodicOrbit::read(std::size_t j, std::size_t len) const {
  if (len == 0) throw InvalidArgument("read: length must be >= 1");
  std::vector<Symbol> w(len);
  const std::size_t n = period();
  for (std::size_t t = 0; t < len; ++t) w[t] = cycle_[(j + t) % n];
  return Word(std::move(w));
}

Rational PeriodicMeasure::of(const Cylinder& c) const {
  Rational r(BigInt(static_cast<unsigned long>(orbit_.occurrences(c.symbols()))),
             BigInt(static_cast<unsigned long>(orbit_.period())));
  r.canonicalize();
  return r;
}

PeriodicMeasure periodic_measure(const PeriodicOrbit& orbit) { return PeriodicMeasure(orbit); }

Rational measure_of_cylinder(const PeriodicMeasure& mu, const Cylinder& c) { return mu.of(c); }

ConvexCombination::ConvexCombination(std::vector<Term> terms) {
  std::map<PeriodicMeasure, Rational> merged;
  for (auto& t : terms) {
    t.weight.canonicalize();
    if (t.weight <= 0 || t.weight > 1) {
      throw InvalidArgument("combination weight " + to_string(t.weight) + " outside (0, 1]");
    }
    merged[t.measure] += t.weight;
  }
  Rational total(0);
  for (auto& [mu, w] : merged) {
    total += w;
    terms_.push_back({w, mu});
  }
  if (total > 1) throw InvalidArgument("combination weights sum to " + to_string(total) + " > 1");
}

Rational ConvexCombination::mass() const {
  Rational m(0);
  for (const auto& t : terms_) m += t.weight;
  return m;
}

Rational ConvexCombination::of(const Cylinder& c) const {
  Rational v(0);
  for (const auto& t : terms_) v += t.weight * t.measure.of(c);
  return v;
}

Rational ConvexCombination::mass_above(Symbol t) const {
  Rational v(0);
  for (const auto& term : terms_) {
    const auto& o = term.measure.orbit();
    Rational f(BigInt(static_cast<unsigned long>(o.count_above(t))), BigInt(static_cast<unsigned long>(o.period())));
    f.canonicalize();
    v += term.weight * f;
  }
  return v;
}

Symbol ConvexCombination::max_symbol() const noexcept {
  Symbol m = 0;
  for (const auto& t : terms_) m = std::max(m, t.measure.orbit().max_symbol());
  return m;
}

std::vector<Symbol> ConvexCombination::alphabet() const {
  std::set<Symbol> a;
  for (const auto& t : terms_) {
    for (Symbol s : t.measure.orbit().cycle()) a.insert(s);
  }
  return {a.begin(), a.end()};
}

ConvexCombination ConvexCombination::scaled(const Rational& lambda) const {
  if (lambda < 0 || lambda > 1) throw InvalidArgument("scale factor " + to_string(lambda) + " outside [0, 1]");
  if (lambda == 0) return {};
  std::vector<Term> t = terms_;
  for (auto& term : t) term.weight *= lambda;
  return ConvexCombination(std::move(t));
}

ConvexCombination ConvexCombination::mix(const Rational& lambda, const ConvexCombination& a,
                                         const ConvexCombination& b) {
  if (lambda < 0 || lambda > 1) throw InvalidArgument("mixing weight " + to_string(lambda) + " outside [0, 1]");
  std::vector<Term> t = a.scaled(lambda).terms_;
  auto rest = b.scaled(1 - lambda).terms_;
  t.insert(t.end(), rest.begin(), rest.end());
  return ConvexCombination(std::move(t));
}

Rational combo_of_cylinder(const ConvexCombination& nu, const Cylinder& c) { return nu.of(c); }

InvarianceReport invariance_check(const ConvexCombination& nu, std::size_t depth, Symbol symbol_cap) {
  if (depth == 0) throw InvalidArgument("invariance_check: depth must be >= 1");
  if (!nu.is_zero() && nu.max_symbol() > symbol_cap) {
    throw InvalidArgument("invariance_check: symbol_cap " + std::to_string(symbol_cap) +
                          " does not cover orbit symbol " + std::to_string(nu.max_symbol()));
  }
  std::set<Word> cylinders;
  for (const auto& t : nu.terms()) {
    const auto& o = t.measure.orbit();
    for (std::size_t len = 1; len <= depth; ++len) {
      for (std::size_t j = 0; j < o.period(); ++j) cylinders.insert(o.read(j, len));
    }
  }
  const auto symbols = nu.alphabet();
  InvarianceReport rep;
  rep.depth = depth;
  for (const auto& d : cylinders) {
    Rational pre(0);
    for (Symbol s : symbols) {
      std::vector<Symbol> sd{s};
      sd.insert(sd.end(), d.begin(), d.end());
      pre += nu.of(Word(std::move(sd)));
    }
    Rational defect = abs(nu.of(d) - pre);
    ++rep.cylinders_checked;
    if (defect > rep.max_defect) {
      rep.max_defect = defect;
      rep.worst = d;
    }
  }
  return rep;
}

}  // namespace cms
