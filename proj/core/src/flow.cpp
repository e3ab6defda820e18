#include "cms/flow.hpp"

#include <algorithm>

#include "cms/error.hpp"

namespace cms {

FlowMeasure::FlowMeasure(ConvexCombination base, Interval integral, Rational lambda, Rational c, std::string roof_id)
    : base_(std::move(base)), integral_(std::move(integral)), lambda_(std::move(lambda)), c_(std::move(c)),
      roof_id_(std::move(roof_id)) {
  if (lambda_ < 0 || lambda_ > 1) throw InvalidArgument("flow measure: mass outside [0, 1]");
  if (c_ <= 0) throw InvalidArgument("flow measure: c must be positive");
  if (lambda_ == 0) {
    base_ = ConvexCombination::zero();
    integral_ = Interval(Rational(0));
    return;
  }
  if (base_.mass() != 1) throw InvalidArgument("flow measure: base must be a probability");
  if (integral_.lo() < c_) throw InvalidArgument("flow measure: roof integral below c");
}

FlowMeasure FlowMeasure::zero(const RoofFunction& tau) {
  return FlowMeasure({}, Interval(Rational(0)), Rational(0), tau.c(), tau.id());
}

FlowMeasure FlowMeasure::scaled(const Rational& factor) const {
  if (factor < 0 || factor > 1) throw InvalidArgument("flow measure: scale outside [0, 1]");
  return FlowMeasure(base_, integral_, lambda_ * factor, c_, roof_id_);
}

FlowMeasure kac_lift(const ConvexCombination& mu, const RoofFunction& tau) {
  if (mu.is_zero()) throw InvalidArgument("kac_lift: zero-mass input");
  if (mu.mass() != 1) throw InvalidArgument("kac_lift: base has mass " + to_string(mu.mass()) + ", expected 1");
  return FlowMeasure(mu, roof_integral(tau, mu), Rational(1), tau.c(), tau.id());
}

std::pair<ConvexCombination, Rational> kac_project(const FlowMeasure& nu) { return {nu.base(), nu.lambda()}; }

Interval flow_cylinder_mass(const FlowMeasure& nu, const Cylinder& c) {
  if (nu.is_zero()) return Interval(Rational(0));
  Rational numerator = nu.lambda() * nu.c() * nu.base().of(c);
  if (numerator == 0) return Interval(Rational(0));
  return Interval(numerator) / nu.integral();
}

DistanceBracket flow_metric_rho(const FlowMeasure& a, const FlowMeasure& b, std::size_t n_terms,
                                const ShiftSpec& spec) {
  if (n_terms == 0) throw InvalidArgument("flow_metric_rho: N must be >= 1");
  if (a.roof_id() != b.roof_id() || a.c() != b.c()) {
    throw InvalidArgument("flow_metric_rho: measures use different roofs or constants c (" + a.roof_id() + " vs " +
                          b.roof_id() + ")");
  }
  auto cylinders = canonical_cylinders(spec, n_terms);
  Interval sum(Rational(0));
  for (std::size_t k = 1; k <= n_terms; ++k) {
    Interval d = abs_difference(flow_cylinder_mass(a, cylinders[k - 1]), flow_cylinder_mass(b, cylinders[k - 1]));
    sum += pow2(-static_cast<long>(k)) * d;
  }
  return {sum.lo(), sum.hi() + pow2(-static_cast<long>(n_terms))};
}

std::string to_string(FlowVerdict v) {
  switch (v) {
    case FlowVerdict::ZeroLimit:
      return "zero flow limit";
    case FlowVerdict::MassLambda:
      return "flow limit lambda*phi(mu)";
    case FlowVerdict::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

FlowLimitReport flow_limit_analyze(const MeasureSequence& seq, const RoofFunction& tau, std::size_t n_max,
                                   std::size_t depth, Symbol symbol_cap, const Rational& tol) {
  if (n_max == 0) throw InvalidArgument("flow_limit_analyze: n_max must be >= 1");
  if (tol <= 0) throw InvalidArgument("flow_limit_analyze: tol must be > 0");
  if (depth < tau.depth()) throw InvalidArgument("flow_limit_analyze: depth must cover the roof depth");

  std::vector<ConvexCombination> terms;
  terms.reserve(n_max);
  FlowLimitReport rep;
  for (std::size_t n = 1; n <= n_max; ++n) {
    terms.push_back(seq.at(n));
    try {
      rep.integrals.push_back(roof_integral(tau, terms.back()));
    } catch (const SearchExhausted& e) {
      throw GeneratorFailure(n, e.what(), true);
    } catch (const Error& e) {
      throw GeneratorFailure(n, e.what());
    }
  }
  rep.window_start = n_max - (n_max + 3) / 4 + 1;
  Rational lo = rep.integrals[rep.window_start - 1].lo();
  Rational hi = rep.integrals[rep.window_start - 1].hi();
  rep.increasing = rep.window_start < n_max;
  for (std::size_t n = rep.window_start; n <= n_max; ++n) {
    const Interval& v = rep.integrals[n - 1];
    lo = std::min(lo, v.lo());
    hi = std::max(hi, v.hi());
    if (n > rep.window_start && !(v.lo() > rep.integrals[n - 2].hi())) rep.increasing = false;
  }
  rep.window_spread = hi - lo;

  if (rep.window_spread <= tol) {
    auto cached = MeasureSequence::from_terms(terms, seq.description());
    rep.base = cylinder_limit(cached, depth, symbol_cap, n_max, tol, LimitOptions{{}, false});
    Interval integral(Rational(0));
    for (const auto& [w, f] : rep.base->limit_table.entries()) {
      if (w.size() == tau.depth()) integral += f * roof_eval(tau, w);
    }
    rep.limit_integral = integral;
    rep.lambda = integral / rep.integrals.back();
    rep.noescape_ok = abs(Rational(1) - rep.base->mass_lower) <= tol;
    if (rep.base->classification == LimitClass::Probability) {
      rep.verdict = FlowVerdict::MassLambda;
    } else {
      rep.verdict = FlowVerdict::Undetermined;
      rep.note = "integrals settle but the base limit is " + to_string(rep.base->classification) +
                 " at this horizon";
    }
  } else if (rep.increasing) {
    rep.verdict = FlowVerdict::ZeroLimit;
    rep.note = "roof integrals strictly increase across the window";
  } else {
    rep.verdict = FlowVerdict::Undetermined;
    rep.note = "roof integrals oscillate";
  }
  return rep;
}

MeasureSequence FlowEscapeResult::sequence() const {
  return MeasureSequence::from_terms(terms, construction == Construction::EscapeOfMass ? "flow escape (escape of mass)"
                                                                                       : "flow escape (first-return loops)");
}

namespace {

// Lexicographically least first-return loop (i, x_2, ..., x_q) with every
// x_t in (floor, cap] and x_t != i.
std::optional<Word> first_return_loop_above(const ShiftSpec& spec, Symbol i, std::size_t q, Symbol floor,
                                            Symbol cap) {
  std::vector<Symbol> path{i};
  std::vector<std::pair<std::vector<Symbol>, std::size_t>> stack;
  auto row = [&](Symbol s) {
    std::vector<Symbol> out;
    for (Symbol x : spec.successors(s, cap).symbols) {
      if (x > floor && x != i) out.push_back(x);
    }
    return out;
  };
  stack.emplace_back(row(i), 0);
  while (!stack.empty()) {
    auto& [next, idx] = stack.back();
    if (idx == next.size()) {
      stack.pop_back();
      path.pop_back();
      continue;
    }
    Symbol x = next[idx++];
    path.push_back(x);
    if (path.size() == q) {
      if (spec.allowed(x, i)) return Word(path);
      path.pop_back();
    } else {
      stack.emplace_back(row(x), 0);
    }
  }
  return std::nullopt;
}

bool strictly_increasing(const std::vector<Interval>& v) {
  for (std::size_t n = 1; n < v.size(); ++n) {
    if (!(v[n].lo() > v[n - 1].hi())) return false;
  }
  return true;
}

}  // namespace

FlowEscapeResult flow_escape_sequence(const ShiftSpec& spec, const RoofFunction& tau, const FlowEscapeCaps& caps) {
  if (spec.traits().alphabet_bound) {
    throw InvalidArgument("flow_escape_sequence: finite alphabet, no roof has an unbounded class-R tail");
  }
  ClassRReport check = class_R_check(tau, caps.class_r_horizon);
  if (!check.c_ok || !check.condition2) {
    throw InvalidArgument("flow_escape_sequence: roof fails class R at horizon " + std::to_string(caps.class_r_horizon));
  }
  if (caps.terms == 0) throw InvalidArgument("flow_escape_sequence: need at least one term");

  FlowEscapeResult res;
  for (std::size_t q = 2; q <= caps.probe_q_max; ++q) {
    FProbe p = f_property_probe(spec, 1, q + 1, caps.probe_cap, caps.probe_symbol_cap);
    if (p.kind == FProbe::Kind::AtLeast && p.count >= caps.probe_cap) {
      res.construction = FlowEscapeResult::Construction::FirstReturnLoops;
      res.i = 1;
      res.q = q;
      break;
    }
  }

  if (res.q != 0) {
    for (std::size_t n = 1; n <= caps.terms; ++n) {
      auto loop = first_return_loop_above(spec, res.i, res.q, n, caps.loop_symbol_cap);
      if (!loop) {
        throw SearchExhausted("flow_escape_sequence: no first-return loop of length " + std::to_string(res.q + 1) +
                              " above symbol " + std::to_string(n));
      }
      res.terms.push_back(ConvexCombination::single(PeriodicMeasure::from_cycle(spec, *loop)));
      res.integrals.push_back(roof_integral(tau, res.terms.back()));
    }
    res.increasing = strictly_increasing(res.integrals);
    return res;
  }

  res.construction = FlowEscapeResult::Construction::EscapeOfMass;
  for (std::size_t n = 1; n <= caps.terms; ++n) {
    EscapeResult e = escape_sequence(spec, n, caps.escape_step * n, caps.escape);
    res.terms.push_back(ConvexCombination::single(e.measure));
    res.integrals.push_back(roof_integral(tau, res.terms.back()));
    Rational m_next = n < check.m.size() ? check.m[n].lo() : check.m.back().lo();
    res.lower_bounds.emplace_back((Rational(1) - e.low_mass) * m_next);
  }
  res.increasing = strictly_increasing(res.lower_bounds);
  return res;
}

}  // namespace cms
