#include "cms/roof.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cms/error.hpp"

namespace cms {

RoofFunction::RoofFunction(std::size_t depth, std::map<Word, Interval> table, TailRule tail, Rational c,
                           Rational var2_bound, unsigned bits, std::string id)
    : depth_(depth), table_(std::move(table)), tail_(tail), c_(std::move(c)), var2_(std::move(var2_bound)),
      bits_(bits), id_(std::move(id)) {
  if (depth_ == 0) throw InvalidArgument("roof: depth must be >= 1");
  if (c_ <= 0) throw InvalidArgument("roof: c must be positive");
  if (var2_ < 0) throw InvalidArgument("roof: var2 bound must be nonnegative");
  if (bits_ < 8) throw InvalidArgument("roof: precision must be at least 8 bits");
  for (const auto& [w, v] : table_) {
    if (w.size() != depth_) {
      throw InvalidArgument("roof: table word " + w.to_string() + " does not have depth " + std::to_string(depth_));
    }
    if (v.lo() < c_) {
      throw InvalidArgument("roof: value " + to_string(v) + " at " + w.to_string() + " is below c = " + to_string(c_));
    }
  }
  if (tail_.kind == TailRule::Kind::Constant && tail_.a <= 0) throw InvalidArgument("roof: constant tail must be positive");
}

RoofFunction RoofFunction::log1p(unsigned bits) {
  Rational c = log_interval(Rational(2), bits).lo();
  return RoofFunction(1, {}, TailRule{TailRule::Kind::Log1p, 0, 0}, c, Rational(0), bits, "log1p");
}

RoofFunction RoofFunction::constant(const Rational& v) {
  if (v <= 0) throw InvalidArgument("roof: constant value must be positive");
  return RoofFunction(1, {}, TailRule{TailRule::Kind::Constant, v, 0}, v, Rational(0), 80, "const:" + to_string(v));
}

Interval RoofFunction::tail_value(Symbol first) const {
  switch (tail_.kind) {
    case TailRule::Kind::Log1p:
      return log_interval(Rational(BigInt(static_cast<unsigned long>(first))) + 1, bits_);
    case TailRule::Kind::Constant:
      return Interval(tail_.a);
    case TailRule::Kind::Affine: {
      Rational v = tail_.a + tail_.b * Rational(BigInt(static_cast<unsigned long>(first)));
      if (v <= 0) throw InvalidArgument("roof: affine tail is non-positive at symbol " + std::to_string(first));
      return Interval(v);
    }
    case TailRule::Kind::None:
      break;
  }
  throw NotRepresented("roof: no table entry and no tail rule for first symbol " + std::to_string(first));
}

Interval roof_eval(const RoofFunction& tau, std::span<const Symbol> w) {
  if (w.empty()) throw InvalidArgument("roof_eval: empty word");
  const std::size_t k = tau.depth();
  if (w.size() >= k) {
    auto it = tau.table().find(Word(std::vector<Symbol>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k))));
    if (it != tau.table().end()) return it->second;
    return tau.tail_value(w.front());
  }
  Word prefix(std::vector<Symbol>(w.begin(), w.end()));
  auto it = tau.table().lower_bound(prefix);
  if (it != tau.table().end() && it->first.starts_with(w)) {
    throw InvalidArgument("roof_eval: word " + prefix.to_string() + " is shorter than depth " + std::to_string(k) +
                          " and its extensions are tabulated differently");
  }
  return tau.tail_value(w.front());
}

ClassRReport class_R_check(const RoofFunction& tau, std::size_t horizon, std::optional<Symbol> alphabet_bound) {
  if (horizon == 0) throw InvalidArgument("class_R_check: horizon must be >= 1");
  ClassRReport rep;
  rep.horizon = horizon;
  Symbol top = horizon;
  if (alphabet_bound) top = std::min<Symbol>(top, *alphabet_bound);

  std::vector<std::pair<Symbol, Interval>> tested;
  for (const auto& [w, v] : tau.table()) {
    if (alphabet_bound && w.max_symbol() > *alphabet_bound) continue;
    tested.emplace_back(w.front(), v);
    if (v.lo() < tau.c()) {
      rep.c_ok = false;
      rep.below_c.push_back(w);
    }
  }
  if (tau.tail().kind != TailRule::Kind::None) {
    for (Symbol s = 1; s <= top; ++s) {
      Interval v = tau.tail_value(s);
      tested.emplace_back(s, v);
      if (v.lo() < tau.c()) {
        rep.c_ok = false;
        rep.below_c.push_back(Word{s});
      }
    }
  }

  for (Symbol k = 1; k <= top; ++k) {
    std::optional<Rational> lo, hi;
    for (const auto& [first, v] : tested) {
      if (first < k) continue;
      if (!lo || v.lo() < *lo) lo = v.lo();
      if (!hi || v.hi() < *hi) hi = v.hi();
    }
    if (!lo) break;
    rep.m.emplace_back(*lo, std::max(*lo, *hi));
  }
  for (std::size_t i = 1; i < rep.m.size(); ++i) {
    if (rep.m[i].hi() < rep.m[i - 1].lo()) rep.m_nondecreasing = false;
  }
  if (alphabet_bound) {
    rep.condition2_vacuous = true;
    rep.condition2 = false;
  } else if (rep.m.size() >= 2) {
    const Interval& last = rep.m.back();
    const Interval& mid = rep.m[(rep.m.size() + 1) / 2 - 1];
    rep.condition2 = rep.m_nondecreasing && last.lo() > mid.hi();
  }

  if (tau.depth() > 2) {
    std::map<Word, std::pair<Rational, Rational>> spread;  // max lo, min hi per 2-prefix
    for (const auto& [w, v] : tau.table()) {
      Word p = w.prefix(2);
      auto it = spread.find(p);
      if (it == spread.end()) {
        spread.emplace(p, std::make_pair(v.lo(), v.hi()));
      } else {
        it->second.first = std::max(it->second.first, v.lo());
        it->second.second = std::min(it->second.second, v.hi());
      }
    }
    for (const auto& [p, s] : spread) {
      Rational d = s.first - s.second;
      if (d > rep.var2_measured) rep.var2_measured = d;
    }
  }
  rep.var2_ok = rep.var2_measured <= tau.var2_bound();
  return rep;
}

Interval birkhoff_sum(const RoofFunction& tau, const PeriodicOrbit& orbit) {
  const std::size_t k = tau.depth();
  std::map<Word, unsigned long> reads;
  for (std::size_t j = 0; j < orbit.period(); ++j) ++reads[orbit.read(j, k)];
  Interval total(Rational(0));
  for (const auto& [w, count] : reads) total += Rational(BigInt(count)) * roof_eval(tau, w);
  return total;
}

Interval roof_integral(const RoofFunction& tau, const ConvexCombination& nu) {
  if (nu.mass() != 1) throw InvalidArgument("roof_integral: base must have mass 1, has " + to_string(nu.mass()));
  Interval total(Rational(0));
  for (const auto& t : nu.terms()) {
    const auto& o = t.measure.orbit();
    Rational scale = t.weight / Rational(BigInt(static_cast<unsigned long>(o.period())));
    total += scale * birkhoff_sum(tau, o);
  }
  return total;
}

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

RoofFunction parse_roof_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> depth;
  std::map<Word, Interval> table;
  TailRule tail;
  std::optional<Rational> c;
  Rational var2(0);
  unsigned bits = 80;
  std::string id = "table";
  auto fail = [&](const std::string& msg) { throw InvalidArgument("roof line " + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.rfind(':');
    if (colon == std::string::npos) fail("expected 'key: value'");
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    try {
      if (key == "depth") {
        Rational d = parse_rational(value);
        if (d.get_den() != 1 || d <= 0) fail("depth must be a positive integer");
        depth = d.get_num().get_ui();
      } else if (key == "tail") {
        std::istringstream v(value);
        std::string kind;
        v >> kind;
        if (kind == "log1p") {
          tail.kind = TailRule::Kind::Log1p;
        } else if (kind == "const") {
          std::string a;
          v >> a;
          tail = {TailRule::Kind::Constant, parse_rational(a), 0};
        } else if (kind == "affine") {
          std::string a, b;
          v >> a >> b;
          tail = {TailRule::Kind::Affine, parse_rational(a), parse_rational(b)};
        } else if (kind == "none") {
          tail.kind = TailRule::Kind::None;
        } else {
          fail("unknown tail rule '" + kind + "'");
        }
      } else if (key == "c") {
        c = parse_rational(value);
      } else if (key == "var2") {
        var2 = parse_rational(value);
      } else if (key == "bits") {
        bits = static_cast<unsigned>(parse_rational(value).get_num().get_ui());
      } else if (key == "id") {
        id = value;
      } else {
        if (!table.emplace(Word::parse(key), Interval(parse_rational(value))).second) fail("duplicate row " + key);
      }
    } catch (const InvalidArgument& e) {
      if (std::string(e.what()).rfind("roof line", 0) == 0) throw;
      fail(e.what());
    }
  }
  if (!depth) {
    depth = table.empty() ? 1 : table.begin()->first.size();
  }
  if (!c) throw InvalidArgument("roof: c must be given explicitly");
  return RoofFunction(*depth, std::move(table), tail, *c, var2, bits, id);
}

RoofFunction load_roof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open roof file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_roof_text(buf.str());
}

RoofFunction resolve_roof(std::string_view reference, unsigned bits) {
  if (reference == "log1p") return RoofFunction::log1p(bits);
  if (reference.rfind("const:", 0) == 0) return RoofFunction::constant(parse_rational(reference.substr(6)));
  if (!reference.empty() && reference.front() == '@') return load_roof_file(std::string(reference.substr(1)));
  throw InvalidArgument("unknown roof '" + std::string(reference) + "'");
}

}  // namespace cms
