#include "cms/limits.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cms/error.hpp"

namespace cms {

MeasureSequence::MeasureSequence(Generator generator, std::string description)
    : gen_(std::move(generator)), description_(std::move(description)) {
  if (!gen_) throw InvalidArgument("MeasureSequence: empty generator");
}

ConvexCombination MeasureSequence::at(std::size_t n) const {
  if (n == 0) throw InvalidArgument("MeasureSequence: indices start at 1");
  try {
    return gen_(n);
  } catch (const GeneratorFailure&) {
    throw;
  } catch (const SearchExhausted& e) {
    throw GeneratorFailure(n, e.what(), true);
  } catch (const std::exception& e) {
    throw GeneratorFailure(n, e.what());
  }
}

MeasureSequence MeasureSequence::constant(ConvexCombination nu) {
  return MeasureSequence([nu](std::size_t) { return nu; }, "constant");
}

MeasureSequence MeasureSequence::from_terms(std::vector<ConvexCombination> terms, std::string description) {
  auto shared = std::make_shared<const std::vector<ConvexCombination>>(std::move(terms));
  return MeasureSequence(
      [shared](std::size_t n) -> ConvexCombination {
        if (n > shared->size()) throw InvalidArgument("only " + std::to_string(shared->size()) + " terms available");
        return (*shared)[n - 1];
      },
      std::move(description));
}

MeasureSequence MeasureSequence::mixed(const Rational& lambda, const ConvexCombination& base) const {
  if (lambda < 0 || lambda > 1) throw InvalidArgument("mixing weight outside [0, 1]");
  auto inner = gen_;
  return MeasureSequence(
      [inner, lambda, base](std::size_t n) { return ConvexCombination::mix(lambda, base, inner(n)); },
      to_string(lambda) + "*base + (1-" + to_string(lambda) + ")*[" + description_ + "]");
}

std::string to_string(LimitClass c) {
  switch (c) {
    case LimitClass::Probability:
      return "Probability";
    case LimitClass::SubProbability:
      return "SubProbability";
    case LimitClass::Defective:
      return "Defective";
    case LimitClass::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

LimitReport cylinder_limit(const MeasureSequence& seq, std::size_t depth, Symbol symbol_cap, std::size_t n_max,
                           const Rational& tol, const LimitOptions& options) {
  if (depth == 0 || symbol_cap == 0 || n_max == 0) {
    throw InvalidArgument("cylinder_limit: depth, symbol_cap and n_max must be positive");
  }
  if (tol <= 0) throw InvalidArgument("cylinder_limit: tol must be > 0");

  LimitReport rep;
  rep.depth = depth;
  rep.symbol_cap = symbol_cap;
  rep.n_max = n_max;
  rep.tol = tol;
  const std::size_t window = (n_max + 3) / 4;
  rep.window_start = n_max - window + 1;

  const std::size_t first = options.full_traces ? 1 : rep.window_start;
  std::vector<ConvexCombination> terms;
  terms.reserve(n_max - first + 1);
  for (std::size_t n = first; n <= n_max; ++n) terms.push_back(seq.at(n));
  auto term = [&](std::size_t n) -> const ConvexCombination& { return terms[n - first]; };

  std::map<Word, std::pair<Rational, Rational>> range;
  std::size_t seen = 0;
  for (std::size_t n = rep.window_start; n <= n_max; ++n) {
    auto table = CylinderFunction::from_measure(term(n), depth, symbol_cap);
    for (auto& [w, r] : range) {
      if (!table.entries().count(w)) r.first = 0;
    }
    for (const auto& [w, v] : table.entries()) {
      auto it = range.find(w);
      if (it == range.end()) {
        Rational lo = seen == 0 ? v : Rational(0);
        range.emplace(w, std::make_pair(lo, v));
      } else {
        it->second.first = std::min(it->second.first, v);
        it->second.second = std::max(it->second.second, v);
      }
    }
    ++seen;
    if (n == n_max) rep.limit_table = std::move(table);
  }
  for (const auto& [w, r] : range) {
    Rational osc = r.second - r.first;
    if (osc > rep.max_oscillation) {
      rep.max_oscillation = osc;
      rep.worst_cylinder = w;
    }
  }

  std::vector<Cylinder> traced = options.trace_cylinders;
  if (traced.empty()) {
    std::set<Word> chosen;
    for (Symbol s = 1; s <= std::min<Symbol>(symbol_cap, 8); ++s) {
      traced.push_back(Word{s});
      chosen.insert(Word{s});
    }
    std::size_t extra = 0;
    for (const auto& [w, v] : rep.limit_table.entries()) {
      if (extra >= 32) break;
      if (chosen.insert(w).second) {
        traced.push_back(w);
        ++extra;
      }
    }
  }
  for (const auto& c : traced) {
    CylinderTrace tr{c, first, {}, Rational(0)};
    Rational lo, hi;
    for (std::size_t n = first; n <= n_max; ++n) {
      Rational v = term(n).of(c);
      if (n >= rep.window_start) {
        if (n == rep.window_start) {
          lo = hi = v;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      tr.values.push_back(std::move(v));
    }
    tr.oscillation = hi - lo;
    rep.traces.push_back(std::move(tr));
  }

  rep.mass_lower = rep.limit_table.depth_one_mass();
  rep.mass_upper = 1;
  if (rep.max_oscillation > tol) {
    rep.classification = LimitClass::Undetermined;
  } else if (depth < 2) {
    // No refinements tabulated, so defects cannot be measured.
    rep.classification = abs(Rational(1) - rep.mass_lower) <= tol ? LimitClass::Probability : LimitClass::SubProbability;
  } else {
    rep.classification = classify_limit(rep, symbol_cap, tol);
  }
  return rep;
}

LimitClass classify_limit(LimitReport& report, Symbol k_max, const Rational& tol) {
  if (k_max == 0) throw InvalidArgument("classify_limit: K must be >= 1");
  const auto& table = report.limit_table;
  if (table.max_depth() < 2) throw NotRepresented("classify_limit: defects need a table of depth >= 2");
  report.defects.clear();
  for (const auto& [c, v] : table.entries()) {
    auto next = table.depth_caps().find(c.size() + 1);
    if (next == table.depth_caps().end()) continue;
    Symbol k = std::min(k_max, next->second);
    Rational d = additivity_defect(table, c, k);
    if (d > tol) report.defects.push_back({c, d});
  }
  report.mass_lower = table.depth_one_mass();
  if (!report.defects.empty()) return LimitClass::Defective;
  if (abs(Rational(1) - report.mass_lower) <= tol) return LimitClass::Probability;
  return LimitClass::SubProbability;
}

std::vector<std::vector<Rational>> weak_star_trace(const MeasureSequence& seq, const std::vector<TestFunction>& fs,
                                                   std::size_t n_max) {
  std::vector<std::vector<Rational>> out(fs.size());
  for (auto& row : out) row.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    ConvexCombination nu = seq.at(n);
    for (std::size_t i = 0; i < fs.size(); ++i) out[i].push_back(integrate_test_function(fs[i], nu));
  }
  return out;
}

}  // namespace cms
