#include "cms/cylinder_function.hpp"

#include <set>

#include "cms/error.hpp"

namespace cms {

namespace {

Word parent_of(const Word& w) { return w.prefix(w.size() - 1); }

Word suffix_of(const Word& w) { return Word(std::vector<Symbol>(w.begin() + 1, w.end())); }

}  // namespace

CylinderFunction::CylinderFunction(std::map<std::size_t, Symbol> depth_caps, std::map<Word, Rational> entries)
    : caps_(std::move(depth_caps)) {
  for (const auto& [d, cap] : caps_) {
    if (d == 0 || cap == 0) throw InvalidArgument("cylinder table: depths and caps must be positive");
  }
  for (auto& [w, v] : entries) {
    v.canonicalize();
    if (!represents(w)) throw InvalidArgument("cylinder table: entry " + w.to_string() + " outside represented depths/caps");
    if (v < 0 || v > 1) throw InvalidArgument("cylinder table: value " + to_string(v) + " at " + w.to_string() + " outside [0, 1]");
    if (v != 0) entries_.emplace(w, v);
  }

  std::map<Word, Rational> child_sums;
  Rational top(0);
  for (const auto& [w, v] : entries_) {
    if (w.size() == 1) {
      top += v;
      continue;
    }
    Word p = parent_of(w);
    if (!represents(p)) continue;
    child_sums[p] += v;
  }
  if (top > 1) throw InvalidArgument("cylinder table: depth-1 values sum to " + to_string(top) + " > 1");
  for (const auto& [p, sum] : child_sums) {
    Rational pv = value(p);
    if (sum > pv) {
      throw InvalidArgument("cylinder table: children of " + p.to_string() + " sum to " + to_string(sum) +
                            " > " + to_string(pv) + " (violates monotonicity/additivity)");
    }
  }
}

CylinderFunction CylinderFunction::from_measure(const ConvexCombination& nu, std::size_t depth, Symbol cap) {
  if (depth == 0 || cap == 0) throw InvalidArgument("from_measure: depth and cap must be positive");
  std::map<std::size_t, Symbol> caps;
  for (std::size_t d = 1; d <= depth; ++d) caps[d] = cap;
  std::map<Word, Rational> entries;
  for (const auto& term : nu.terms()) {
    const auto& o = term.measure.orbit();
    Rational unit = term.weight / Rational(BigInt(static_cast<unsigned long>(o.period())));
    for (std::size_t j = 0; j < o.period(); ++j) {
      for (std::size_t len = 1; len <= depth; ++len) {
        Word w = o.read(j, len);
        if (w.back() > cap) break;
        entries[w] += unit;
      }
    }
  }
  return CylinderFunction(std::move(caps), std::move(entries));
}

CylinderFunction CylinderFunction::zero(std::size_t depth, Symbol cap) {
  std::map<std::size_t, Symbol> caps;
  for (std::size_t d = 1; d <= depth; ++d) caps[d] = cap;
  return CylinderFunction(std::move(caps), {});
}

bool CylinderFunction::represents(const Cylinder& c) const {
  auto it = caps_.find(c.size());
  return it != caps_.end() && c.max_symbol() <= it->second;
}

Rational CylinderFunction::value(const Cylinder& c) const {
  if (!represents(c)) {
    auto it = caps_.find(c.size());
    if (it == caps_.end()) {
      throw NotRepresented("depth " + std::to_string(c.size()) + " of " + c.to_string() + " is not represented");
    }
    throw NotRepresented("cylinder " + c.to_string() + " exceeds symbol cap " + std::to_string(it->second));
  }
  auto e = entries_.find(c);
  return e == entries_.end() ? Rational(0) : e->second;
}

Symbol CylinderFunction::cap_at(std::size_t depth) const {
  auto it = caps_.find(depth);
  if (it == caps_.end()) throw NotRepresented("depth " + std::to_string(depth) + " is not represented");
  return it->second;
}

Rational CylinderFunction::depth_one_mass() const {
  Rational m(0);
  for (const auto& [w, v] : entries_) {
    if (w.size() == 1) m += v;
  }
  return m;
}

Rational additivity_defect(const CylinderFunction& f, const Cylinder& c, Symbol k_max) {
  if (k_max == 0) throw InvalidArgument("additivity_defect: K must be >= 1");
  Rational parent = f.value(c);
  Symbol child_cap = f.cap_at(c.size() + 1);
  if (k_max > child_cap) {
    throw NotRepresented("additivity_defect: K = " + std::to_string(k_max) + " exceeds depth-" +
                         std::to_string(c.size() + 1) + " cap " + std::to_string(child_cap));
  }
  Rational sum(0);
  Word lo = c.appended(1);
  for (auto it = f.entries().lower_bound(lo); it != f.entries().end(); ++it) {
    const Word& w = it->first;
    if (w.size() != c.size() + 1 || !w.starts_with(c.symbols())) {
      if (!w.starts_with(c.symbols())) break;
      continue;
    }
    if (w.back() > k_max) break;
    sum += it->second;
  }
  return parent - sum;
}

InvarianceReport invariance_check(const CylinderFunction& f) {
  const auto& caps = f.depth_caps();
  for (const auto& [w, v] : f.entries()) {
    auto next = caps.find(w.size() + 1);
    if (next == caps.end() || w.max_symbol() > next->second) continue;
    Rational defect = additivity_defect(f, w, next->second);
    if (defect != 0) {
      throw InvalidArgument("invariance_check: table is not additive at " + w.to_string() + " (defect " +
                            to_string(defect) + "); not a measure");
    }
  }
  InvarianceReport rep;
  rep.depth = f.max_depth();
  std::set<Word> targets;
  for (const auto& [w, v] : f.entries()) {
    auto next = caps.find(w.size() + 1);
    if (next != caps.end()) targets.insert(w);
    if (w.size() >= 2 && caps.count(w.size() - 1)) {
      Word s = suffix_of(w);
      if (f.represents(s)) targets.insert(s);
    }
  }
  for (const auto& d : targets) {
    Symbol cap = caps.at(d.size() + 1);
    if (d.max_symbol() > cap) continue;
    Rational pre(0);
    for (const auto& [w, v] : f.entries()) {
      if (w.size() == d.size() + 1 && w[0] <= cap && std::equal(d.begin(), d.end(), w.begin() + 1)) pre += v;
    }
    Rational defect = abs(f.value(d) - pre);
    ++rep.cylinders_checked;
    if (defect > rep.max_defect) {
      rep.max_defect = defect;
      rep.worst = d;
    }
  }
  return rep;
}

}  // namespace cms
