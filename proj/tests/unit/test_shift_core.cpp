#include <doctest.h>

#include "cms/builtins.hpp"
#include "cms/error.hpp"
#include "cms/orbit.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cms;

namespace {

std::vector<oracle::Seq> as_seqs(const std::vector<Word>& ws) {
  std::vector<oracle::Seq> out;
  for (const auto& w : ws) out.push_back(w.vec());
  return out;
}

}  // namespace

TEST_CASE("admissibility on the gallery") {
  CHECK(is_admissible(full_shift(), std::vector<Symbol>{1, 7, 3}));
  CHECK(is_admissible(star_shift(), std::vector<Symbol>{1, 5, 1}));
  CHECK_FALSE(is_admissible(star_shift(), std::vector<Symbol>{5, 6}));
  CHECK_FALSE(make_builtin("star").is_admissible(Word{2, 3}));
  CHECK_FALSE(finite_full_shift(3).is_admissible(Word{1, 4}));
  CHECK(renewal_shift().is_admissible(Word{1, 4, 3, 2, 1}));
  CHECK_FALSE(renewal_shift().is_admissible(Word{2, 3}));
  CHECK_THROWS_AS(is_admissible(full_shift(), std::vector<Symbol>{}), InvalidArgument);
  CHECK_FALSE(full_shift().allowed(0, 1));
}

TEST_CASE("successor rows and truncation") {
  Row r = successors(full_shift(), 1, 4);
  CHECK(r.symbols == std::vector<Symbol>{1, 2, 3, 4});
  CHECK(r.truncated);
  r = successors(star_shift(), 5, 100);
  CHECK(r.symbols == std::vector<Symbol>{1});
  CHECK_FALSE(r.truncated);
  r = successors(finite_full_shift(3), 2, 10);
  CHECK(r.symbols == std::vector<Symbol>{1, 2, 3});
  CHECK_FALSE(r.truncated);
  CHECK(make_builtin("finite_full:3").successors(1, 64).symbols == std::vector<Symbol>{1, 2, 3});
}

TEST_CASE("successor rows agree with the transition oracle") {
  gen::Gen g(5);
  std::vector<ShiftSpec> specs{full_shift(), star_shift(), renewal_shift(), finite_full_shift(4),
                               make_builtin("loop_family:n"), g.text_shift(6)};
  for (const auto& spec : specs) {
    for (Symbol i = 1; i <= 20; ++i) {
      std::vector<Symbol> want;
      for (Symbol j = 1; j <= 30; ++j) {
        if (spec.allowed(i, j)) want.push_back(j);
      }
      CHECK_MESSAGE(spec.successors(i, 30).symbols == want, spec.name() << " row " << i);
    }
  }
}

TEST_CASE("gallery descriptors") {
  CHECK_THROWS_AS(make_builtin("nope"), InvalidArgument);
  CHECK_THROWS_AS(make_builtin("finite_full:0"), InvalidArgument);
  CHECK_THROWS_AS(make_builtin("loop_family:bogus"), InvalidArgument);
  CHECK(make_builtin("finite_full:2").traits().alphabet_bound == Symbol(2));
  CHECK(make_builtin("loop_family:2^(n^2)").traits().f_property);
  CHECK_FALSE(full_shift().traits().f_property);
  auto lf = make_builtin("loop_family:list:0,2,1");
  CHECK(lf.root_loops()->first_return_count(1) == 0);
  CHECK(lf.root_loops()->first_return_count(2) == 2);
  CHECK(lf.root_loops()->first_return_count(4) == 0);
}

TEST_CASE("loop_family has a_n first-return loops of length n") {
  // a_n = n: count loops at the root of each length with a test-side recursion.
  ShiftSpec spec = make_builtin("loop_family:n");
  std::vector<BigInt> f(9, 0);
  for (std::size_t k = 1; k < f.size(); ++k) f[k] = k == 1 ? 1 : static_cast<unsigned long>(k);
  auto Z = oracle::renewal_counts(f, 6);
  for (std::size_t n = 1; n <= 6; ++n) {
    LoopList l = enumerate_loops(spec, 1, n, 100000, 200);
    CHECK_FALSE(l.saturated);
    CHECK(BigInt(static_cast<unsigned long>(l.loops.size())) == Z[n]);
  }
  FProbe p = f_property_probe(spec, 1, 4, 1000, 200);
  CHECK(p.kind == FProbe::Kind::FiniteCount);
  // Words of 4 symbols from 1 to 1: the 3 simple loops of 3 edges, plus
  // compositions 1+2, 2+1 and 1+1+1 of shorter loops.
  CHECK(p.count == Z[3]);
}

TEST_CASE("text shifts") {
  ShiftSpec s = parse_shift_text("name: golden\nalphabet: 2\ndefault: none\n1: 1 2\n2: 1\n");
  CHECK(s.name() == "golden");
  CHECK(s.allowed(1, 2));
  CHECK_FALSE(s.allowed(2, 2));
  CHECK_FALSE(s.allowed(1, 3));
  CHECK(s.traits().alphabet_bound == Symbol(2));
  ShiftSpec d = parse_shift_text("default: 1\n1: 2 3\n# comment\n");
  CHECK(d.allowed(7, 1));
  CHECK_FALSE(d.allowed(7, 2));
  CHECK(d.allowed(1, 3));
  CHECK_THROWS_AS(parse_shift_text("1 2 3\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_shift_text("1: 2\n1: 3\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_shift_text("1: -2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_shift_text("default: none\n"), InvalidArgument);
  CHECK_THROWS_AS(resolve_shift("@/nonexistent/file.txt"), InvalidArgument);
}

TEST_CASE("connect examples") {
  CHECK(connect(full_shift(), 3, 7, 5, 100) == Word{3, 7});
  CHECK(connect(star_shift(), 4, 9, 5, 100) == Word{4, 1, 9});
  CHECK_FALSE(connect(star_shift(), 4, 9, 2, 100).has_value());
  CHECK(connect(full_shift(), 5, 5, 1, 10) == Word{5});
  CHECK(connect(renewal_shift(), 4, 1, 8, 10) == Word{4, 3, 2, 1});
  CHECK(connect(renewal_shift(), 1, 3, 8, 10) == Word{1, 3});
}

TEST_CASE("connect matches brute force search (property)") {
  gen::Gen g(17);
  for (int trial = 0; trial < 60; ++trial) {
    ShiftSpec spec = g.text_shift(5);
    Symbol a = g.between(1, 5), b = g.between(1, 5);
    auto got = connect(spec, a, b, 5, 5);
    auto want = oracle::shortest_connection(spec, a, b, 5, 5);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(got->vec() == *want);
  }
}

TEST_CASE("enumerate_loops examples") {
  auto l = enumerate_loops(finite_full_shift(2), 1, 2, 100, 10);
  CHECK(l.loops == std::vector<Word>{Word{1, 1}, Word{1, 2}});
  l = enumerate_loops(full_shift(), 1, 2, 5, 1000);
  CHECK(l.loops.size() == 5);
  CHECK(l.saturated);
  l = enumerate_loops(star_shift(), 1, 2, 10, 8);
  REQUIRE(l.loops.size() == 8);
  CHECK(l.loops.front() == Word{1, 1});
  CHECK(l.loops.back() == Word{1, 8});
}

TEST_CASE("enumerate_loops matches brute force (property)") {
  gen::Gen g(23);
  for (int trial = 0; trial < 40; ++trial) {
    ShiftSpec spec = g.text_shift(4);
    Symbol a = g.between(1, 4);
    std::size_t n = g.between(1, 5);
    auto got = enumerate_loops(spec, a, n, 1u << 20, 4);
    CHECK_FALSE(got.saturated);
    CHECK(as_seqs(got.loops) == oracle::loops_at(spec, a, n, 4));
  }
}

TEST_CASE("F-property probe") {
  FProbe p = f_property_probe(full_shift(), 1, 3, 100, 1000);
  CHECK(p.kind == FProbe::Kind::AtLeast);
  CHECK(p.count >= 100);
  p = f_property_probe(finite_full_shift(3), 1, 3, 100, 64);
  CHECK(p.kind == FProbe::Kind::FiniteCount);
  CHECK(p.count == 3);
  ShiftSpec lf = make_builtin("loop_family:const:4");
  p = f_property_probe(lf, 1, 4, 1000, 1000);
  CHECK(p.kind == FProbe::Kind::FiniteCount);
}

TEST_CASE("structure check flags dead rows and unreachable symbols") {
  ShiftSpec s = parse_shift_text("alphabet: 4\ndefault: none\n1: 1 2\n2: 1\n3: 3\n4: 1\n");
  StructureReport r = check_structure(s, 4, 4, 8);
  CHECK_FALSE(r.ok());
  CHECK(std::find(r.unreachable.begin(), r.unreachable.end(), Symbol(3)) != r.unreachable.end());
  CHECK(std::find(r.empty_columns.begin(), r.empty_columns.end(), Symbol(4)) != r.empty_columns.end());
  CHECK(check_structure(full_shift(), 8, 16, 4).ok());
  CHECK(check_structure(star_shift(), 8, 16, 4).ok());
}

TEST_CASE("periodic orbits reduce to primitive least rotations") {
  auto o = PeriodicOrbit::from_cycle(full_shift(), Word{2, 1, 2, 1});
  CHECK(o.cycle() == Word{1, 2});
  CHECK(o.was_reduced());
  CHECK(o.reduced_from() == 4);
  CHECK(PeriodicOrbit::from_cycle(full_shift(), Word{1, 1, 2}).period() == 3);
  CHECK_THROWS_AS(PeriodicOrbit::from_cycle(star_shift(), Word{2, 3}), InvalidArgument);
  // (1, 2) is admissible under renewal but 2 -> 1 closes; (1, 3) does not close.
  CHECK_THROWS_AS(PeriodicOrbit::from_cycle(renewal_shift(), Word{1, 3}), InvalidArgument);
}

TEST_CASE("rotation and root agree with brute force (property)") {
  gen::Gen g(31);
  ShiftSpec spec = finite_full_shift(3);
  for (int trial = 0; trial < 500; ++trial) {
    // Build proper powers often to exercise the reduction.
    auto base = g.cycle(spec, 5, 3);
    std::size_t reps = g.between(1, 3);
    oracle::Seq s;
    for (std::size_t r = 0; r < reps; ++r) s.insert(s.end(), base.begin(), base.end());
    s = oracle::rotate(s, g.below(s.size()));
    auto o = PeriodicOrbit::from_cycle(spec, Word(s));
    CHECK(o.cycle().vec() == oracle::least_rotation(oracle::primitive_root(oracle::least_rotation(s))));
    // Occurrence counts for a random short word.
    oracle::Seq w(g.between(1, 3));
    for (auto& x : w) x = g.between(1, 3);
    auto root = oracle::primitive_root(s);
    CHECK(o.occurrences(w) == oracle::cyclic_count(root, w));
  }
}
