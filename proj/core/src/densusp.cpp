#include "cms/densusp.hpp"

#include "cms/error.hpp"

namespace cms {

namespace {

std::size_t default_terms(const Rational& eps) {
  // Smallest N with 2^-N <= eps / 2.
  std::size_t n = 1;
  while (pow2(-static_cast<long>(n)) > eps / 2) ++n;
  return n;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

DensuspResult densusp_approximate(const ConvexCombination& target, const RoofFunction& tau, const Rational& eps,
                                  const ShiftSpec& spec, const DensuspCaps& caps) {
  if (eps <= 0) throw InvalidArgument("densusp: eps must be > 0");
  if (target.is_zero() || target.mass() != 1) throw InvalidArgument("densusp: target must have mass 1");
  const std::size_t n_terms = caps.n_terms ? caps.n_terms : default_terms(eps);
  const Interval target_integral = roof_integral(tau, target);
  const auto& terms = target.terms();

  if (terms.size() == 1) {
    const auto& mu = terms.front().measure;
    DensuspResult res{mu,
                      mu.orbit().cycle(),
                      BigInt(static_cast<unsigned long>(mu.orbit().period())),
                      {BigInt(1)},
                      {{}},
                      n_terms,
                      metric_d(target, target, n_terms, spec),
                      Interval(Rational(0)),
                      target_integral,
                      false,
                      0};
    res.integral_gap = abs_difference(target_integral, target_integral);
    res.converged = res.distance.upper <= eps && res.integral_gap.hi() <= eps;
    return res;
  }

  BigInt r0 = 1;
  for (const auto& t : terms) {
    BigInt qt = t.weight.get_den() * BigInt(static_cast<unsigned long>(t.measure.orbit().period()));
    r0 = lcm(r0, BigInt(qt / gcd(t.weight.get_num(), qt)));
  }

  std::vector<std::vector<Symbol>> connectors;
  std::size_t connector_total = 0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const Word& u = terms[j].measure.orbit().cycle();
    const Word& v = terms[(j + 1) % terms.size()].measure.orbit().cycle();
    if (spec.allowed(u.back(), v.front())) {
      connectors.emplace_back();
      continue;
    }
    auto w = connect(spec, u.back(), v.front(), caps.connect_max_len, caps.connect_symbol_cap);
    if (!w) {
      throw SearchExhausted("densusp: no connecting word from " + std::to_string(u.back()) + " to " +
                            std::to_string(v.front()) + " within length " + std::to_string(caps.connect_max_len));
    }
    connectors.emplace_back(w->begin() + 1, w->end() - 1);
    connector_total += connectors.back().size();
  }

  std::optional<DensuspResult> best;
  auto better = [](const DensuspResult& a, const DensuspResult& b) {
    if (a.distance.upper != b.distance.upper) return a.distance.upper < b.distance.upper;
    return a.integral_gap.hi() < b.integral_gap.hi();
  };

  BigInt R = r0;
  for (std::size_t doubling = 0;; ++doubling, R *= 2) {
    if (R + connector_total > BigInt(static_cast<unsigned long>(caps.max_period))) break;
    std::vector<Symbol> word;
    word.reserve(R.get_ui() + connector_total);
    std::vector<BigInt> reps;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const Word& u = terms[j].measure.orbit().cycle();
      Rational r = terms[j].weight * Rational(R) / Rational(BigInt(static_cast<unsigned long>(u.size())));
      BigInt rj = r.get_num();
      reps.push_back(rj);
      for (unsigned long k = 0; k < rj.get_ui(); ++k) word.insert(word.end(), u.begin(), u.end());
      word.insert(word.end(), connectors[j].begin(), connectors[j].end());
    }
    Word cycle(std::move(word));
    PeriodicMeasure mu = PeriodicMeasure::from_cycle(spec, cycle);
    auto single = ConvexCombination::single(mu);
    DensuspResult res{mu,
                      cycle,
                      R,
                      reps,
                      connectors,
                      n_terms,
                      metric_d(single, target, n_terms, spec),
                      Interval(Rational(0)),
                      roof_integral(tau, single),
                      false,
                      doubling};
    res.integral_gap = abs_difference(res.integral, target_integral);
    res.converged = res.distance.upper <= eps && res.integral_gap.hi() <= eps;
    if (res.converged) return res;
    if (!best || better(res, *best)) best = std::move(res);
  }
  if (!best) {
    throw SearchExhausted("densusp: the smallest block length " + R.get_str() + " already exceeds max_period " +
                          std::to_string(caps.max_period));
  }
  return *best;
}

}  // namespace cms
