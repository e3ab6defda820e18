#include "cms/metric.hpp"

#include "cms/error.hpp"

namespace cms {

namespace {

constexpr std::uint64_t kMaxWeight = 4096;

// Compositions of `remaining` into `slots` parts, lexicographic, admissible.
void compositions(const ShiftSpec& spec, std::vector<Symbol>& prefix, std::uint64_t remaining, std::size_t slots,
                  std::vector<Cylinder>& out, std::size_t count) {
  if (out.size() >= count) return;
  if (slots == 0) {
    if (remaining == 0) out.emplace_back(prefix);
    return;
  }
  std::uint64_t hi = remaining - (slots - 1);
  for (Symbol s = 1; s <= hi && out.size() < count; ++s) {
    if (!prefix.empty() && !spec.allowed(prefix.back(), s)) continue;
    prefix.push_back(s);
    if (prefix.size() > 1 || spec.is_admissible(prefix)) compositions(spec, prefix, remaining - s, slots - 1, out, count);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Cylinder> canonical_cylinders(const ShiftSpec& spec, std::size_t count) {
  std::vector<Cylinder> out;
  out.reserve(count);
  for (std::uint64_t weight = 1; out.size() < count; ++weight) {
    if (weight > kMaxWeight) {
      throw SearchExhausted("canonical enumeration: fewer than " + std::to_string(count) +
                            " admissible cylinders with symbol sum <= " + std::to_string(kMaxWeight));
    }
    for (std::size_t len = 1; len <= weight && out.size() < count; ++len) {
      std::vector<Symbol> prefix;
      compositions(spec, prefix, weight, len, out, count);
    }
  }
  return out;
}

Cylinder canonical_cylinder_enumeration(std::size_t index, const ShiftSpec& spec) {
  if (index == 0) throw InvalidArgument("canonical enumeration is 1-based");
  return canonical_cylinders(spec, index).back();
}

Rational value_on(const MeasureLike& m, const Cylinder& c) {
  return std::visit([&](const auto& x) -> Rational {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, ConvexCombination>) {
      return x.of(c);
    } else {
      return x.value(c);
    }
  }, m);
}

DistanceBracket metric_d(const MeasureLike& a, const MeasureLike& b, std::size_t n_terms, const ShiftSpec& spec) {
  if (n_terms == 0) throw InvalidArgument("metric_d: N must be >= 1");
  auto cylinders = canonical_cylinders(spec, n_terms);
  DistanceBracket d;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const auto& c = cylinders[n - 1];
    Rational va, vb;
    try {
      va = value_on(a, c);
      vb = value_on(b, c);
    } catch (const NotRepresented& e) {
      throw NotRepresented("metric_d: canonical cylinder #" + std::to_string(n) + " " + c.to_string() + ": " +
                           e.what());
    }
    d.lower += pow2(-static_cast<long>(n)) * abs(va - vb);
  }
  d.upper = d.lower + pow2(-static_cast<long>(n_terms));
  return d;
}

}  // namespace cms
