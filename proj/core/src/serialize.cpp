#include "cms/serialize.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "cms/error.hpp"

namespace cms {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Interval& v) { return Json{{"lo", to_string(v.lo())}, {"hi", to_string(v.hi())}}; }

Json to_json(const Word& w) { return Json(w.vec()); }

Json to_json(const PeriodicMeasure& mu) {
  return Json{{"orbit", to_json(mu.orbit().cycle())}, {"period", mu.orbit().period()}};
}

Json to_json(const ConvexCombination& nu) {
  Json terms = Json::array();
  for (const auto& t : nu.terms()) {
    terms.push_back(Json{{"weight", to_json(t.weight)}, {"orbit", to_json(t.measure.orbit().cycle())}});
  }
  return Json{{"kind", "combination"}, {"mass", to_json(nu.mass())}, {"terms", std::move(terms)}};
}

Json to_json(const CylinderFunction& f) {
  Json caps = Json::array();
  for (const auto& [d, c] : f.depth_caps()) caps.push_back(Json{{"depth", d}, {"cap", c}});
  Json entries = Json::array();
  for (const auto& [w, v] : f.entries()) {
    entries.push_back(Json::array({to_json(w), v.get_num().get_str(), v.get_den().get_str()}));
  }
  return Json{{"kind", "cylinder_function"}, {"depth_caps", std::move(caps)}, {"entries", std::move(entries)}};
}

Json to_json(const MeasureLike& m) {
  return std::visit([](const auto& x) { return to_json(x); }, m);
}

Json to_json(const DistanceBracket& d) { return Json{{"lower", to_json(d.lower)}, {"upper", to_json(d.upper)}}; }

Json to_json(const InvarianceReport& r) {
  Json j{{"depth", r.depth}, {"cylinders_checked", r.cylinders_checked}, {"max_defect", to_json(r.max_defect)}};
  j["worst"] = r.worst ? to_json(*r.worst) : Json(nullptr);
  return j;
}

Json to_json(const FProbe& p) {
  return Json{{"kind", p.kind == FProbe::Kind::FiniteCount ? "FiniteCount" : "AtLeast"},
              {"count", p.count},
              {"truncated", p.truncated}};
}

Json to_json(const StructureReport& r) {
  return Json{{"horizon", r.horizon},     {"symbol_cap", r.symbol_cap},       {"ok", r.ok()},
              {"empty_rows", r.empty_rows}, {"empty_columns", r.empty_columns}, {"unreachable", r.unreachable}};
}

Json to_json(const LimitReport& r) {
  Json defects = Json::array();
  for (const auto& d : r.defects) defects.push_back(Json{{"cylinder", to_json(d.cylinder)}, {"defect", to_json(d.defect)}});
  Json traces = Json::array();
  for (const auto& t : r.traces) {
    traces.push_back(Json{{"cylinder", to_json(t.cylinder)},
                          {"first_index", t.first_index},
                          {"last_value", t.values.empty() ? Json(nullptr) : to_json(t.values.back())},
                          {"oscillation", to_json(t.oscillation)}});
  }
  return Json{{"depth", r.depth},
              {"symbol_cap", r.symbol_cap},
              {"n_max", r.n_max},
              {"tol", to_json(r.tol)},
              {"window_start", r.window_start},
              {"classification", to_string(r.classification)},
              {"mass_lower", to_json(r.mass_lower)},
              {"mass_upper", to_json(r.mass_upper)},
              {"max_oscillation", to_json(r.max_oscillation)},
              {"worst_cylinder", r.worst_cylinder ? to_json(*r.worst_cylinder) : Json(nullptr)},
              {"defects", std::move(defects)},
              {"traces", std::move(traces)},
              {"limit_table", to_json(r.limit_table)}};
}

Json to_json(const EscapeResult& r) {
  return Json{{"k", r.k},
              {"target_len", r.target_len},
              {"period", r.measure.orbit().period()},
              {"excursion_length", r.excursion.size()},
              {"connector", to_json(r.connector)},
              {"connector_length", r.connector_length},
              {"low_mass", to_json(r.low_mass)},
              {"bound", to_json(r.bound)},
              {"certified", r.certified},
              {"states_explored", r.states_explored},
              {"orbit", to_json(r.measure.orbit().cycle())}};
}

Json to_json(const EntropyReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"n", row.n},
                        {"loops", row.loops.get_str()},
                        {"truncated", row.truncated},
                        {"estimate", row.estimate ? to_json(*row.estimate) : Json(nullptr)},
                        {"tail_sup", row.tail_sup ? to_json(*row.tail_sup) : Json(nullptr)}});
  }
  return Json{{"a", r.a},
              {"symbol_cap", r.symbol_cap},
              {"bits", r.bits},
              {"used_root_loops", r.used_root_loops},
              {"rows", std::move(rows)}};
}

Json to_json(const ClassRReport& r) {
  Json m = Json::array();
  for (const auto& v : r.m) m.push_back(to_json(v));
  Json below = Json::array();
  for (const auto& w : r.below_c) below.push_back(to_json(w));
  return Json{{"horizon", r.horizon},
              {"passed", r.passed()},
              {"c_ok", r.c_ok},
              {"below_c", std::move(below)},
              {"m", std::move(m)},
              {"m_nondecreasing", r.m_nondecreasing},
              {"condition2", r.condition2},
              {"condition2_vacuous", r.condition2_vacuous},
              {"uniformly_continuous", r.uniformly_continuous},
              {"var2_measured", to_json(r.var2_measured)},
              {"var2_ok", r.var2_ok}};
}

Json to_json(const C0Report& r) {
  Json sups = Json::array();
  for (const auto& v : r.sup_on_symbol) sups.push_back(to_json(v));
  Json vars = Json::array();
  for (const auto& v : r.condition3) {
    Json values = Json::array();
    for (const auto& x : v.values) values.push_back(to_json(x));
    vars.push_back(Json{{"cylinder", to_json(v.cylinder)}, {"values", std::move(values)}, {"eventual", to_json(v.eventual)}});
  }
  return Json{{"horizon", r.horizon},
              {"in_closure_of_h", r.in_closure_of_h()},
              {"modulus_depth", r.modulus_depth},
              {"condition1", r.condition1},
              {"sup_on_symbol", std::move(sups)},
              {"condition2_eventual", to_json(r.condition2_eventual)},
              {"condition2", r.condition2},
              {"condition3", std::move(vars)},
              {"condition3_ok", r.condition3_ok}};
}

Json to_json(const FlowMeasure& nu) {
  return Json{{"lambda", to_json(nu.lambda())},
              {"c", to_json(nu.c())},
              {"roof", nu.roof_id()},
              {"integral", to_json(nu.integral())},
              {"base", to_json(nu.base())}};
}

Json to_json(const FlowLimitReport& r) {
  Json integrals = Json::array();
  for (const auto& v : r.integrals) integrals.push_back(to_json(v));
  Json j{{"verdict", to_string(r.verdict)},
         {"note", r.note},
         {"window_start", r.window_start},
         {"window_spread", to_json(r.window_spread)},
         {"increasing", r.increasing},
         {"noescape_ok", r.noescape_ok},
         {"limit_integral", r.limit_integral ? to_json(*r.limit_integral) : Json(nullptr)},
         {"lambda", r.lambda ? to_json(*r.lambda) : Json(nullptr)},
         {"integrals", std::move(integrals)}};
  j["base"] = r.base ? to_json(*r.base) : Json(nullptr);
  return j;
}

Json to_json(const FlowEscapeResult& r) {
  Json integrals = Json::array();
  for (const auto& v : r.integrals) integrals.push_back(to_json(v));
  Json lower = Json::array();
  for (const auto& v : r.lower_bounds) lower.push_back(to_json(v));
  Json orbits = Json::array();
  for (const auto& t : r.terms) orbits.push_back(to_json(t.terms().front().measure.orbit().cycle()));
  return Json{{"construction", r.construction == FlowEscapeResult::Construction::EscapeOfMass ? "escape_of_mass"
                                                                                              : "first_return_loops"},
              {"i", r.i},
              {"q", r.q},
              {"increasing", r.increasing},
              {"integrals", std::move(integrals)},
              {"lower_bounds", std::move(lower)},
              {"orbits", std::move(orbits)}};
}

Json to_json(const DensuspResult& r) {
  Json reps = Json::array();
  for (const auto& v : r.repetitions) reps.push_back(v.get_str());
  Json conns = Json::array();
  for (const auto& c : r.connectors) conns.push_back(c);
  return Json{{"converged", r.converged},
              {"n_terms", r.n_terms},
              {"distance", to_json(r.distance)},
              {"integral", to_json(r.integral)},
              {"integral_gap", to_json(r.integral_gap)},
              {"R", r.R.get_str()},
              {"doublings", r.doublings},
              {"repetitions", std::move(reps)},
              {"connectors", std::move(conns)},
              {"period", r.measure.orbit().period()}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(j.dump()));
  throw InvalidArgument("expected a rational as a \"p/q\" string, got " + j.dump());
}

Word word_from_json(const Json& j) {
  if (j.is_string()) return Word::parse(j.get<std::string>());
  if (!j.is_array()) throw InvalidArgument("expected a word as an array of symbols, got " + j.dump());
  std::vector<Symbol> s;
  for (const auto& x : j) {
    if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() > 0)) {
      throw InvalidArgument("word symbols must be positive integers, got " + x.dump());
    }
    s.push_back(x.get<Symbol>());
  }
  return Word(std::move(s));
}

ConvexCombination combination_from_json(const Json& j, const ShiftSpec& spec) {
  if (!j.is_object() || !j.contains("terms")) throw InvalidArgument("combination JSON needs a \"terms\" array");
  std::vector<ConvexCombination::Term> terms;
  for (const auto& t : j.at("terms")) {
    terms.push_back({rational_from_json(t.at("weight")), PeriodicMeasure::from_cycle(spec, word_from_json(t.at("orbit")))});
  }
  return ConvexCombination(std::move(terms));
}

CylinderFunction cylinder_function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("depth_caps") || !j.contains("entries")) {
    throw InvalidArgument("cylinder function JSON needs \"depth_caps\" and \"entries\"");
  }
  std::map<std::size_t, Symbol> caps;
  for (const auto& c : j.at("depth_caps")) caps[c.at("depth").get<std::size_t>()] = c.at("cap").get<Symbol>();
  std::map<Word, Rational> entries;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw InvalidArgument("entry must be [word, numerator, denominator]");
    BigInt num(e[1].is_string() ? e[1].get<std::string>() : e[1].dump());
    BigInt den(e[2].is_string() ? e[2].get<std::string>() : e[2].dump());
    if (den == 0) throw InvalidArgument("entry with zero denominator");
    Rational v(num, den);
    v.canonicalize();
    if (!entries.emplace(word_from_json(e[0]), v).second) throw InvalidArgument("duplicate entry " + e[0].dump());
  }
  return CylinderFunction(std::move(caps), std::move(entries));
}

MeasureLike measure_from_json(const Json& j, const ShiftSpec& spec) {
  std::string kind = j.value("kind", std::string("combination"));
  if (kind == "combination") return combination_from_json(j, spec);
  if (kind == "cylinder_function") return cylinder_function_from_json(j);
  throw InvalidArgument("unknown measure kind '" + kind + "'");
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

ConvexCombination parse_combination(std::string_view text, const ShiftSpec& spec) {
  std::vector<ConvexCombination::Term> terms;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string part = trim(text.substr(start, end - start));
    start = end + 1;
    if (part.empty()) {
      if (end == text.size()) break;
      throw InvalidArgument("empty term in combination '" + std::string(text) + "'");
    }
    auto open = part.find_first_of("([");
    auto colon = part.find(':');
    Rational weight(1);
    std::string word = part;
    if (colon != std::string::npos && (open == std::string::npos || colon < open)) {
      weight = parse_rational(trim(part.substr(0, colon)));
      word = trim(part.substr(colon + 1));
    }
    terms.push_back({weight, PeriodicMeasure::from_cycle(spec, Word::parse(word))});
  }
  if (terms.empty()) throw InvalidArgument("empty combination");
  return ConvexCombination(std::move(terms));
}

MeasureLike resolve_measure(std::string_view reference, const ShiftSpec& spec) {
  if (!reference.empty() && reference.front() == '@') {
    std::string path(reference.substr(1));
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open measure file '" + path + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw InvalidArgument("measure file '" + path + "': " + e.what());
    }
    return measure_from_json(j, spec);
  }
  return parse_combination(reference, spec);
}

std::string decimal_string(const Rational& q, unsigned digits) {
  BigInt scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  BigInt num = abs(q).get_num() * scale * 2 + q.get_den();
  BigInt den = q.get_den() * 2;
  BigInt scaled = num / den;  // floor(|q|·10^d + 1/2)
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - digits, ".");
  if (q < 0 && scaled != 0) s.insert(0, "-");
  return s;
}

namespace {

std::string cell(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<CylinderTrace>& traces) {
  out << "n,cylinder,numerator,denominator,decimal_display_only\n";
  for (const auto& t : traces) {
    for (std::size_t j = 0; j < t.values.size(); ++j) {
      const Rational& v = t.values[j];
      out << t.first_index + j << ',' << cell(t.cylinder) << ',' << v.get_num().get_str() << ','
          << v.get_den().get_str() << ',' << decimal_string(v) << '\n';
    }
  }
}

void write_series_csv(std::ostream& out, const std::vector<std::string>& names,
                      const std::vector<std::vector<Rational>>& series) {
  if (names.size() != series.size()) throw InvalidArgument("write_series_csv: name count mismatch");
  out << "n,series,numerator,denominator,decimal_display_only\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    for (std::size_t j = 0; j < series[k].size(); ++j) {
      const Rational& v = series[k][j];
      out << j + 1 << ',' << names[k] << ',' << v.get_num().get_str() << ',' << v.get_den().get_str() << ','
          << decimal_string(v) << '\n';
    }
  }
}

}  // namespace cms
