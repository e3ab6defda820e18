#include <doctest.h>

#include "cms/asymptotics.hpp"
#include "cms/builtins.hpp"
#include "cms/error.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cms;

namespace {

ConvexCombination single(const ShiftSpec& spec, std::vector<Symbol> w) {
  return ConvexCombination::single(PeriodicMeasure::from_cycle(spec, Word(std::move(w))));
}

MeasureSequence pairs(const ShiftSpec& spec) {
  return MeasureSequence([spec](std::size_t n) { return single(spec, {1, n + 1}); }, "pairs");
}

MeasureSequence deltas() {
  return MeasureSequence([](std::size_t n) { return single(full_shift(), {n}); }, "deltas");
}

}  // namespace

TEST_CASE("sequences report the failing index") {
  MeasureSequence bad([](std::size_t n) {
    if (n == 7) throw InvalidArgument("boom");
    return single(full_shift(), {1});
  }, "bad");
  CHECK(bad.at(6).mass() == 1);
  try {
    bad.at(7);
    FAIL("expected a generator failure");
  } catch (const GeneratorFailure& e) {
    CHECK(e.index() == 7);
    CHECK_FALSE(e.exhausted());
  }
  CHECK_THROWS_AS(cylinder_limit(bad, 2, 4, 8, Rational(1, 100)), GeneratorFailure);
  CHECK_THROWS_AS(bad.at(0), InvalidArgument);
  auto terms = MeasureSequence::from_terms({single(full_shift(), {2})}, "one");
  CHECK_THROWS_AS(terms.at(2), GeneratorFailure);
}

TEST_CASE("limits of the reference sequences") {
  Rational tol(1, 1000);
  // Constant.
  LimitReport r = cylinder_limit(MeasureSequence::constant(single(full_shift(), {1})), 2, 8, 20, tol);
  CHECK(r.classification == LimitClass::Probability);
  CHECK(r.limit_table == CylinderFunction::from_measure(single(full_shift(), {1}), 2, 8));
  // Escape to infinity: the zero table.
  r = cylinder_limit(deltas(), 2, 8, 40, tol);
  CHECK(r.limit_table.entries().empty());
  CHECK(r.mass_lower == 0);
  CHECK(r.classification == LimitClass::SubProbability);
  // Half the mass stays on [1] but no depth-2 cylinder keeps any.
  r = cylinder_limit(pairs(full_shift()), 2, 8, 40, tol);
  CHECK(r.limit_table.value(Word{1}) == Rational(1, 2));
  for (Symbol s = 1; s <= 8; ++s) CHECK(r.limit_table.value(Word{1, s}) == 0);
  CHECK(r.classification == LimitClass::Defective);
  REQUIRE(r.defects.size() == 1);
  CHECK(r.defects[0].cylinder == Word{1});
  CHECK(r.defects[0].defect == Rational(1, 2));
  CHECK_THROWS_AS(cylinder_limit(deltas(), 2, 8, 40, Rational(0)), InvalidArgument);
}

TEST_CASE("oscillation inside the window is Undetermined") {
  MeasureSequence flip([](std::size_t n) { return single(full_shift(), {n % 2 ? 1u : 2u}); }, "flip");
  LimitReport r = cylinder_limit(flip, 1, 4, 40, Rational(1, 10));
  CHECK(r.classification == LimitClass::Undetermined);
  CHECK(r.max_oscillation == 1);
  // The pair sequence with a cap above the window start also oscillates.
  r = cylinder_limit(pairs(full_shift()), 2, 40, 40, Rational(1, 1000));
  CHECK(r.classification == LimitClass::Undetermined);
  CHECK(classify_limit(r, 40, Rational(1, 1000)) == LimitClass::Defective);
}

TEST_CASE("classify_limit needs depth two") {
  LimitReport r = cylinder_limit(deltas(), 1, 4, 20, Rational(1, 100));
  CHECK_THROWS_AS(classify_limit(r, 4, Rational(1, 100)), NotRepresented);
}

TEST_CASE("mixtures keep the fixed part") {
  for (Rational lambda : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)}) {
    MeasureSequence seq = deltas().mixed(lambda, single(full_shift(), {1}));
    LimitReport r = cylinder_limit(seq, 2, 8, 40, Rational(1, 1000));
    CHECK(r.limit_table.value(Word{1}) == lambda);
    CHECK(r.limit_table.value(Word{1, 1}) == lambda);
    CHECK(r.mass_lower == lambda);
    CHECK(r.classification == (lambda == 1 ? LimitClass::Probability : LimitClass::SubProbability));
  }
}

TEST_CASE("weak star traces") {
  auto tr = weak_star_trace(pairs(full_shift()), {TestFunction::indicator(Word{1})}, 10);
  for (const auto& v : tr[0]) CHECK(v == Rational(1, 2));
  tr = weak_star_trace(deltas(), {TestFunction::indicator(Word{1})}, 5);
  CHECK(tr[0] == std::vector<Rational>{1, 0, 0, 0, 0});
}

TEST_CASE("escape on the full shift") {
  EscapeResult e = escape_sequence(full_shift(), 3, 10, EscapeCaps{64, 8, 64, 100000});
  CHECK(e.excursion.size() >= 10);
  CHECK(e.excursion.front() <= 3);
  CHECK(e.excursion.back() <= 3);
  for (std::size_t t = 1; t + 1 < e.excursion.size(); ++t) CHECK(e.excursion[t] >= 4);
  // Recount ν(∪_{s<=3}[s]) from the orbit word.
  const auto& w = e.measure.orbit().cycle().vec();
  Rational low = 0;
  for (Symbol s = 1; s <= 3; ++s) low += oracle::cyclic_frequency(w, {s});
  CHECK(e.low_mass == low);
  CHECK(e.low_mass <= e.bound);
  CHECK(e.certified);
}

TEST_CASE("escape on a loop family") {
  ShiftSpec spec = make_builtin("loop_family:n");
  EscapeResult e = escape_sequence(spec, 1, 50, EscapeCaps{1u << 16, 8, 64, 1000000});
  CHECK(e.low_mass == oracle::cyclic_frequency(e.measure.orbit().cycle().vec(), {1}));
  CHECK(e.low_mass <= Rational(BigInt(static_cast<unsigned long>(e.connector_length + 2)), BigInt(50)));
  CHECK(e.certified);
}

TEST_CASE("escape on the renewal shift descends through the interior") {
  EscapeResult e = escape_sequence(renewal_shift(), 1, 20, EscapeCaps{64, 8, 64, 100000});
  CHECK(e.certified);
  CHECK(e.measure.orbit().period() >= 20);
}

TEST_CASE("escape fails where every orbit returns") {
  CHECK_THROWS_AS(escape_sequence(star_shift(), 1, 10, EscapeCaps{64, 8, 64, 10000}), SearchExhausted);
  auto seq = escape_measure_sequence(star_shift(), 1, 5, EscapeCaps{64, 8, 64, 10000});
  try {
    seq.at(1);
    FAIL("expected exhaustion");
  } catch (const GeneratorFailure& e) {
    CHECK(e.exhausted());
  }
}

TEST_CASE("star orbits keep frequency of 1 at least one half (property)") {
  gen::Gen g(71);
  ShiftSpec spec = star_shift();
  for (int trial = 0; trial < 200; ++trial) {
    auto w = g.cycle(spec, 16, 50);
    CHECK(2 * oracle::cyclic_count(w, {1}) >= w.size());
  }
}

TEST_CASE("first-return loops") {
  auto ms = first_return_measures(full_shift(), 1, 2, 5, 100);
  REQUIRE(ms.size() == 5);
  for (std::size_t k = 0; k < ms.size(); ++k) {
    CHECK(ms[k].orbit().cycle() == Word{1, k + 2});
    CHECK(ms[k].of(Word{1}) == Rational(1, 2));
  }
  auto star = first_return_measures(star_shift(), 1, 2, 3, 100);
  CHECK(star[0].orbit().cycle() == Word{1, 2});
  CHECK_THROWS_AS(first_return_measures(finite_full_shift(3), 1, 2, 10, 100), SearchExhausted);
  auto q3 = first_return_measures(full_shift(), 1, 3, 4, 100);
  for (const auto& m : q3) CHECK(m.of(Word{1}) == Rational(1, 3));
}

TEST_CASE("entropy on finite full shifts matches matrix powers") {
  for (Symbol m : {2u, 3u, 5u}) {
    ShiftSpec spec = finite_full_shift(m);
    auto A = oracle::transfer_matrix(spec, m);
    for (bool root : {true, false}) {
      EntropyReport r = gurevich_entropy_estimate(spec, 1, 1, 12, m, EntropyOptions{80, root});
      REQUIRE(r.rows.size() == 12);
      for (const auto& row : r.rows) {
        CHECK(row.loops == oracle::diagonal_of_power(A, 1, row.n));
        CHECK_FALSE(row.truncated);
      }
    }
  }
}

TEST_CASE("entropy on random finite shifts matches matrix powers (property)") {
  gen::Gen g(73);
  for (int trial = 0; trial < 25; ++trial) {
    Symbol m = g.between(2, 6);
    ShiftSpec spec = g.text_shift(m);
    Symbol a = g.between(1, m);
    auto A = oracle::transfer_matrix(spec, m);
    EntropyReport r = gurevich_entropy_estimate(spec, a, 1, 10, m);
    for (const auto& row : r.rows) {
      CHECK(row.loops == oracle::diagonal_of_power(A, a, row.n));
      if (row.loops == 0) CHECK_FALSE(row.estimate.has_value());
    }
  }
}

TEST_CASE("entropy on a loop family follows the renewal recursion") {
  ShiftSpec spec = make_builtin("loop_family:n");
  std::vector<BigInt> f(13, 0);
  for (std::size_t k = 1; k < f.size(); ++k) f[k] = static_cast<unsigned long>(k);
  auto Z = oracle::renewal_counts(f, 12);
  EntropyReport fast = gurevich_entropy_estimate(spec, 1, 1, 12, 1u << 12);
  EntropyReport slow = gurevich_entropy_estimate(spec, 1, 1, 8, 1u << 12, EntropyOptions{80, false});
  for (const auto& row : fast.rows) CHECK(row.loops == Z[row.n]);
  for (const auto& row : slow.rows) CHECK(row.loops == Z[row.n]);
  CHECK(fast.used_root_loops);
  CHECK_FALSE(slow.used_root_loops);
}

TEST_CASE("entropy estimates and the tail supremum") {
  EntropyReport r = gurevich_entropy_estimate(finite_full_shift(2), 1, 1, 8, 2);
  Interval log2 = log_interval(Rational(2), 80);
  for (const auto& row : r.rows) {
    REQUIRE(row.estimate);
    // (1/n) log 2^(n-1)
    Interval want = log2 * Rational(BigInt(static_cast<unsigned long>(row.n - 1)), BigInt(static_cast<unsigned long>(row.n)));
    CHECK(row.estimate->lo() <= want.hi());
    CHECK(want.lo() <= row.estimate->hi());
    REQUIRE(row.tail_sup);
    CHECK(row.tail_sup->hi() >= row.estimate->lo());
  }
  CHECK_THROWS_AS(gurevich_entropy_estimate(finite_full_shift(2), 1, 5, 4, 2), InvalidArgument);
  CHECK_THROWS_AS(gurevich_entropy_estimate(finite_full_shift(2), 0, 1, 4, 2), InvalidArgument);
}
