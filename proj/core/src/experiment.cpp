#include "cms/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cms/builtins.hpp"
#include "cms/error.hpp"
#include "cms/version.hpp"

namespace cms {

const std::vector<std::string>& experiment_verbs() {
  static const std::vector<std::string> verbs{
      "shift-info",     "shift-check",     "orbit-enum",   "orbit-connect",  "measure-eval",
      "measure-invariance", "metric-d",    "metric-rho",   "converge-trace", "converge-classify",
      "escape",         "nonf-demo",       "entropy",      "flow-integral",  "flow-rho",
      "flow-limit",     "flow-escape",     "densusp"};
  return verbs;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["verb"] = c.verb;
  j["shift"] = c.shift;
  j["roof"] = c.roof ? Json(*c.roof) : Json(nullptr);
  j["bits"] = c.bits;
  j["sequence"] = c.sequence;
  j["mix_lambda"] = c.mix_lambda ? to_json(*c.mix_lambda) : Json(nullptr);
  j["mix_base"] = c.mix_base ? Json(*c.mix_base) : Json(nullptr);
  j["measure"] = c.measure;
  j["measure_b"] = c.measure_b;
  j["cylinders"] = c.cylinders;
  j["depth"] = c.depth;
  j["symbol_cap"] = c.symbol_cap;
  j["n_max"] = c.n_max;
  j["n_terms"] = c.n_terms;
  j["tol"] = to_json(c.tol);
  j["i"] = c.i;
  j["q"] = c.q;
  j["count"] = c.count;
  j["a"] = c.a;
  j["n_lo"] = c.n_lo;
  j["n_hi"] = c.n_hi;
  j["k_lo"] = c.k_lo;
  j["k_hi"] = c.k_hi;
  j["target_len"] = c.target_len;
  j["target_per_k"] = c.target_per_k;
  j["from"] = c.from;
  j["to"] = c.to;
  j["max_len"] = c.max_len;
  j["length"] = c.length;
  j["eps"] = to_json(c.eps);
  j["target"] = c.target;
  j["max_period"] = c.max_period;
  j["use_root_loops"] = c.use_root_loops;
  j["horizon"] = c.horizon;
  j["out_dir"] = c.out_dir;
  j["prefix"] = c.prefix;
  j["seed"] = c.seed;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentConfig c;
  auto str = [](const Json& v) {
    if (!v.is_string()) throw InvalidArgument("expected a string, got " + v.dump());
    return v.get<std::string>();
  };
  auto count = [](const Json& v) -> std::uint64_t {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    throw InvalidArgument("expected a nonnegative integer, got " + v.dump());
  };
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "verb") c.verb = str(v);
      else if (key == "shift") c.shift = str(v);
      else if (key == "roof") c.roof = v.is_null() ? std::nullopt : std::optional<std::string>(str(v));
      else if (key == "bits") c.bits = static_cast<unsigned>(count(v));
      else if (key == "sequence") c.sequence = str(v);
      else if (key == "mix_lambda") c.mix_lambda = v.is_null() ? std::nullopt : std::optional<Rational>(rational_from_json(v));
      else if (key == "mix_base") c.mix_base = v.is_null() ? std::nullopt : std::optional<std::string>(str(v));
      else if (key == "measure") c.measure = str(v);
      else if (key == "measure_b") c.measure_b = str(v);
      else if (key == "cylinders") {
        c.cylinders.clear();
        for (const auto& x : v) c.cylinders.push_back(str(x));
      }
      else if (key == "depth") c.depth = count(v);
      else if (key == "symbol_cap") c.symbol_cap = count(v);
      else if (key == "n_max") c.n_max = count(v);
      else if (key == "n_terms") c.n_terms = count(v);
      else if (key == "tol") c.tol = rational_from_json(v);
      else if (key == "i") c.i = count(v);
      else if (key == "q") c.q = count(v);
      else if (key == "count") c.count = count(v);
      else if (key == "a") c.a = count(v);
      else if (key == "n_lo") c.n_lo = count(v);
      else if (key == "n_hi") c.n_hi = count(v);
      else if (key == "k_lo") c.k_lo = count(v);
      else if (key == "k_hi") c.k_hi = count(v);
      else if (key == "target_len") c.target_len = count(v);
      else if (key == "target_per_k") c.target_per_k = count(v);
      else if (key == "from") c.from = count(v);
      else if (key == "to") c.to = count(v);
      else if (key == "max_len") c.max_len = count(v);
      else if (key == "length") c.length = count(v);
      else if (key == "eps") c.eps = rational_from_json(v);
      else if (key == "target") c.target = str(v);
      else if (key == "max_period") c.max_period = count(v);
      else if (key == "use_root_loops") {
        if (!v.is_boolean()) throw InvalidArgument("expected true or false");
        c.use_root_loops = v.get<bool>();
      }
      else if (key == "horizon") c.horizon = count(v);
      else if (key == "out_dir") c.out_dir = str(v);
      else if (key == "prefix") c.prefix = str(v);
      else if (key == "seed") c.seed = count(v);
      else throw InvalidArgument("unknown key");
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  try {
    return config_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw InvalidArgument("config file '" + path + "': " + e.what());
  }
}

std::pair<std::size_t, std::size_t> parse_range(std::string_view text) {
  auto number = [&](std::string_view s) {
    Rational v = parse_rational(s);
    if (v.get_den() != 1 || v < 0) throw InvalidArgument("range bound '" + std::string(s) + "' is not a count");
    return static_cast<std::size_t>(v.get_num().get_ui());
  };
  auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    auto v = number(text);
    return {v, v};
  }
  auto lo = number(text.substr(0, dots));
  auto hi = number(text.substr(dots + 2));
  if (lo > hi) throw InvalidArgument("empty range '" + std::string(text) + "'");
  return {lo, hi};
}

namespace {

bool needs_sequence(const std::string& verb) {
  return verb == "converge-trace" || verb == "converge-classify" || verb == "flow-limit";
}

bool needs_roof(const std::string& verb) {
  return verb == "metric-rho" || verb == "flow-rho" || verb == "flow-integral" || verb == "flow-limit" ||
         verb == "flow-escape" || verb == "densusp";
}

// Splits "head:rest" at the first colon.
std::pair<std::string, std::string> split_kind(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

std::size_t parse_count(const std::string& s, const char* what) {
  Rational v = parse_rational(s);
  if (v.get_den() != 1 || v <= 0) throw InvalidArgument(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(v.get_num().get_ui());
}

RoofFunction config_roof(const ExperimentConfig& c) {
  if (!c.roof) throw InvalidArgument("verb '" + c.verb + "' needs a roof");
  return resolve_roof(*c.roof, c.bits);
}

}  // namespace

void validate(const ExperimentConfig& c) {
  const auto& verbs = experiment_verbs();
  if (std::find(verbs.begin(), verbs.end(), c.verb) == verbs.end()) {
    throw InvalidArgument("unknown verb '" + c.verb + "'");
  }
  if (c.depth == 0 || c.symbol_cap == 0 || c.n_max == 0 || c.n_terms == 0) {
    throw InvalidArgument("depth, symbol_cap, n_max and n_terms must be positive");
  }
  if (c.tol <= 0) throw InvalidArgument("tol must be > 0");
  if (c.eps <= 0) throw InvalidArgument("eps must be > 0");
  if (c.i == 0 || c.a == 0 || c.from == 0 || c.to == 0 || c.k_lo == 0) {
    throw InvalidArgument("symbols start at 1");
  }
  if (c.q == 0 || c.count == 0 || c.length == 0 || c.max_len == 0 || c.target_len == 0 || c.horizon == 0) {
    throw InvalidArgument("q, count, length, max_len, target_len and horizon must be positive");
  }
  if (c.n_lo == 0 || c.n_lo > c.n_hi) throw InvalidArgument("need 1 <= n_lo <= n_hi");
  if (c.k_lo > c.k_hi) throw InvalidArgument("need k_lo <= k_hi");
  if (c.bits < 8) throw InvalidArgument("bits must be at least 8");
  if (c.mix_lambda && (*c.mix_lambda < 0 || *c.mix_lambda > 1)) throw InvalidArgument("mix_lambda outside [0, 1]");
  if (c.mix_lambda.has_value() != c.mix_base.has_value()) {
    throw InvalidArgument("mix_lambda and mix_base go together");
  }
  ShiftSpec spec = resolve_shift(c.shift);
  if (needs_roof(c.verb)) config_roof(c);
  else if (c.roof) resolve_roof(*c.roof, c.bits);
  if (needs_sequence(c.verb)) {
    if (c.sequence.empty()) throw InvalidArgument("verb '" + c.verb + "' needs a sequence");
    build_sequence(c, spec);
  }
}

MeasureSequence build_sequence(const ExperimentConfig& c, const ShiftSpec& spec) {
  auto [kind, rest] = split_kind(c.sequence);
  std::optional<MeasureSequence> seq;
  if (kind == "fixed") {
    seq = MeasureSequence::constant(parse_combination(rest, spec));
  } else if (kind == "delta") {
    if (!rest.empty()) throw InvalidArgument("sequence 'delta' takes no parameters");
    seq = MeasureSequence(
        [spec](std::size_t n) { return ConvexCombination::single(PeriodicMeasure::from_cycle(spec, Word{n})); },
        "delta at the fixed point n");
  } else if (kind == "pair") {
    std::size_t e = rest.empty() ? 1 : parse_count(rest, "pair exponent");
    seq = MeasureSequence(
        [spec, e](std::size_t n) {
          BigInt m = 1;
          for (std::size_t t = 0; t < e; ++t) m *= static_cast<unsigned long>(n);
          m += 1;
          if (!m.fits_ulong_p()) throw InvalidArgument("pair orbit symbol overflows");
          return ConvexCombination::single(PeriodicMeasure::from_cycle(spec, Word{1, m.get_ui()}));
        },
        e == 1 ? "orbit (1, n+1)" : "orbit (1, n^" + std::to_string(e) + "+1)");
  } else if (kind == "loops") {
    auto [si, sq] = split_kind(rest);
    Symbol i = parse_count(si, "loops symbol");
    std::size_t q = parse_count(sq, "loops q");
    seq = non_f_witness_sequence(spec, i, q, c.n_max, std::max<Symbol>(c.symbol_cap, c.n_max + i + 1));
  } else if (kind == "escape") {
    auto [sk, ss] = split_kind(rest);
    Symbol k = parse_count(sk, "escape k");
    std::size_t step = parse_count(ss, "escape step");
    seq = escape_measure_sequence(spec, k, step, EscapeCaps{c.symbol_cap, c.max_len, std::min<Symbol>(c.symbol_cap, 1024)});
  } else if (kind == "densusp") {
    ConvexCombination target = parse_combination(rest, spec);
    RoofFunction tau = config_roof(c);
    DensuspCaps caps{0, c.max_period, c.max_len, std::min<Symbol>(c.symbol_cap, 1024)};
    seq = MeasureSequence(
        [target, tau, spec, caps](std::size_t n) {
          return ConvexCombination::single(
              densusp_approximate(target, tau, pow2(-static_cast<long>(n)), spec, caps).measure);
        },
        "densusp approximations at eps = 2^-n");
  } else {
    throw InvalidArgument("unknown sequence constructor '" + kind + "'");
  }
  if (c.mix_lambda) seq = seq->mixed(*c.mix_lambda, parse_combination(*c.mix_base, spec));
  return *seq;
}

namespace {

struct Context {
  const ExperimentConfig& config;
  ShiftSpec spec;
  std::string prefix;
  RunOutcome& out;
  Json& result;
  void artifact(const std::string& suffix, std::string content) {
    out.artifacts.push_back({prefix + suffix, std::move(content)});
  }
};

std::vector<Cylinder> parse_cylinders(const std::vector<std::string>& texts) {
  std::vector<Cylinder> out;
  for (const auto& t : texts) out.push_back(Word::parse(t));
  return out;
}

ConvexCombination as_combination(const MeasureLike& m, const char* role) {
  if (auto p = std::get_if<ConvexCombination>(&m)) return *p;
  throw InvalidArgument(std::string(role) + " must be a combination of periodic measures");
}

Json traits_json(const ShiftTraits& t) {
  return Json{{"transitive", t.transitive},
              {"f_property", t.f_property},
              {"locally_compact", t.locally_compact},
              {"alphabet_bound", t.alphabet_bound ? Json(*t.alphabet_bound) : Json(nullptr)}};
}

void shift_info(Context& ctx) {
  const auto& c = ctx.config;
  ctx.result["name"] = ctx.spec.name();
  ctx.result["traits"] = traits_json(ctx.spec.traits());
  ctx.result["symbol_cap_default"] = ctx.spec.symbol_cap_default();
  Json rows = Json::array();
  for (Symbol s = 1; s <= std::min<Symbol>(c.symbol_cap, 8); ++s) {
    if (auto bound = ctx.spec.traits().alphabet_bound; bound && s > *bound) break;
    Row r = ctx.spec.successors(s, c.symbol_cap);
    rows.push_back(Json{{"symbol", s}, {"successors", r.symbols}, {"truncated", r.truncated}});
  }
  ctx.result["rows"] = std::move(rows);
  if (auto loops = ctx.spec.root_loops()) {
    Json f = Json::array();
    for (std::uint64_t k = 1; k <= 8; ++k) f.push_back(loops->first_return_count(k).get_str());
    ctx.result["root_loops"] = Json{{"root", loops->root}, {"first_return_counts", std::move(f)}};
  }
}

void shift_check(Context& ctx) {
  const auto& c = ctx.config;
  ctx.result["name"] = ctx.spec.name();
  ctx.result["structure"] = to_json(check_structure(ctx.spec, c.horizon, c.symbol_cap, c.max_len));
  ctx.result["f_probe"] = to_json(f_property_probe(ctx.spec, c.i, c.length, c.count, c.symbol_cap));
  ctx.result["f_probe_params"] = Json{{"i", c.i}, {"length", c.length}, {"cap", c.count}};
}

void orbit_enum(Context& ctx) {
  const auto& c = ctx.config;
  LoopList l = enumerate_loops(ctx.spec, c.a, c.length, c.count, c.symbol_cap);
  Json loops = Json::array();
  for (const auto& w : l.loops) loops.push_back(to_json(w));
  ctx.result["a"] = c.a;
  ctx.result["length"] = c.length;
  ctx.result["saturated"] = l.saturated;
  ctx.result["loops"] = std::move(loops);
}

void orbit_connect(Context& ctx) {
  const auto& c = ctx.config;
  ctx.result["from"] = c.from;
  ctx.result["to"] = c.to;
  auto w = connect(ctx.spec, c.from, c.to, c.max_len, c.symbol_cap);
  ctx.result["word"] = w ? to_json(*w) : Json(nullptr);
  if (!w) {
    throw SearchExhausted("no connecting word within length " + std::to_string(c.max_len) + " over symbols <= " +
                          std::to_string(c.symbol_cap));
  }
}

void measure_eval(Context& ctx) {
  const auto& c = ctx.config;
  MeasureLike m = resolve_measure(c.measure, ctx.spec);
  std::vector<Cylinder> cyl =
      c.cylinders.empty() ? canonical_cylinders(ctx.spec, c.n_terms) : parse_cylinders(c.cylinders);
  Json values = Json::array();
  std::ostringstream csv;
  csv << "index,cylinder,numerator,denominator,decimal_display_only\n";
  for (std::size_t k = 0; k < cyl.size(); ++k) {
    Rational v = value_on(m, cyl[k]);
    values.push_back(Json{{"cylinder", to_json(cyl[k])}, {"value", to_json(v)}});
    csv << k + 1 << ',';
    for (std::size_t t = 0; t < cyl[k].size(); ++t) csv << (t ? " " : "") << cyl[k][t];
    csv << ',' << v.get_num().get_str() << ',' << v.get_den().get_str() << ',' << decimal_string(v) << '\n';
  }
  ctx.result["measure"] = to_json(m);
  ctx.result["values"] = std::move(values);
  ctx.artifact(".csv", csv.str());
}

void measure_invariance(Context& ctx) {
  const auto& c = ctx.config;
  MeasureLike m = resolve_measure(c.measure, ctx.spec);
  InvarianceReport r = std::holds_alternative<ConvexCombination>(m)
                           ? invariance_check(std::get<ConvexCombination>(m), c.depth, c.symbol_cap)
                           : invariance_check(std::get<CylinderFunction>(m));
  ctx.result["invariance"] = to_json(r);
}

void metric_d_verb(Context& ctx) {
  const auto& c = ctx.config;
  MeasureLike a = resolve_measure(c.measure, ctx.spec);
  MeasureLike b = resolve_measure(c.measure_b, ctx.spec);
  ctx.result["n_terms"] = c.n_terms;
  ctx.result["d"] = to_json(metric_d(a, b, c.n_terms, ctx.spec));
}

FlowMeasure flow_measure(const std::string& ref, const RoofFunction& tau, const ShiftSpec& spec, const char* role) {
  if (ref == "zero") return FlowMeasure::zero(tau);
  return kac_lift(as_combination(resolve_measure(ref, spec), role), tau);
}

void metric_rho_verb(Context& ctx) {
  const auto& c = ctx.config;
  RoofFunction tau = config_roof(c);
  FlowMeasure a = flow_measure(c.measure, tau, ctx.spec, "measure");
  FlowMeasure b = flow_measure(c.measure_b, tau, ctx.spec, "measure_b");
  ctx.result["a"] = to_json(a);
  ctx.result["b"] = to_json(b);
  ctx.result["n_terms"] = c.n_terms;
  ctx.result["rho"] = to_json(flow_metric_rho(a, b, c.n_terms, ctx.spec));
}

void flow_integral(Context& ctx) {
  const auto& c = ctx.config;
  RoofFunction tau = config_roof(c);
  ConvexCombination mu = as_combination(resolve_measure(c.measure, ctx.spec), "measure");
  FlowMeasure nu = kac_lift(mu, tau);
  ctx.result["roof"] = tau.id();
  ctx.result["c"] = to_json(tau.c());
  ctx.result["integral"] = to_json(nu.integral());
  ctx.result["class_r"] = to_json(class_R_check(tau, c.horizon, ctx.spec.traits().alphabet_bound));
  std::vector<Cylinder> cyl;
  if (c.cylinders.empty()) {
    for (Symbol s : mu.alphabet()) cyl.push_back(Word{s});
  } else {
    cyl = parse_cylinders(c.cylinders);
  }
  Json masses = Json::array();
  for (const auto& w : cyl) masses.push_back(Json{{"cylinder", to_json(w)}, {"flow_mass", to_json(flow_cylinder_mass(nu, w))}});
  ctx.result["flow_cylinder_masses"] = std::move(masses);
}

LimitReport run_limit(Context& ctx, const MeasureSequence& seq, Symbol cap, const LimitOptions& opts) {
  const auto& c = ctx.config;
  LimitReport r = cylinder_limit(seq, c.depth, cap, c.n_max, c.tol, opts);
  std::ostringstream csv;
  write_trace_csv(csv, r.traces);
  ctx.artifact(".csv", csv.str());
  return r;
}

void converge(Context& ctx, bool classify) {
  const auto& c = ctx.config;
  MeasureSequence seq = build_sequence(c, ctx.spec);
  ctx.result["sequence"] = seq.description();
  LimitReport r = run_limit(ctx, seq, c.symbol_cap, LimitOptions{parse_cylinders(c.cylinders), true});
  ctx.result["window_settled"] = r.max_oscillation <= c.tol;
  if (classify && r.depth >= 2) {
    ctx.result["classify_limit"] = to_string(classify_limit(r, c.symbol_cap, c.tol));
  }
  ctx.result["limit"] = to_json(r);
}

void escape_verb(Context& ctx) {
  const auto& c = ctx.config;
  EscapeCaps caps{c.symbol_cap, c.max_len, std::min<Symbol>(c.symbol_cap, 1024)};
  ctx.result["results"] = Json::array();
  std::ostringstream csv;
  csv << "k,target_len,numerator,denominator,bound_numerator,bound_denominator,certified,decimal_display_only\n";
  try {
    for (Symbol k = c.k_lo; k <= c.k_hi; ++k) {
      std::size_t len = c.target_per_k ? c.target_per_k * k : c.target_len;
      EscapeResult e = escape_sequence(ctx.spec, k, len, caps);
      ctx.result["results"].push_back(to_json(e));
      csv << k << ',' << len << ',' << e.low_mass.get_num().get_str() << ',' << e.low_mass.get_den().get_str() << ','
          << e.bound.get_num().get_str() << ',' << e.bound.get_den().get_str() << ',' << (e.certified ? 1 : 0) << ','
          << decimal_string(e.low_mass) << '\n';
    }
  } catch (...) {
    ctx.artifact(".csv", csv.str());
    throw;
  }
  ctx.artifact(".csv", csv.str());
}

void nonf_demo(Context& ctx) {
  const auto& c = ctx.config;
  // Term n uses symbols past n, so tabulating below `count` shows the defect.
  Symbol cap = std::min<Symbol>(c.symbol_cap, c.count);
  Symbol loop_cap = std::max<Symbol>(c.symbol_cap, c.count + c.i + 1);
  MeasureSequence seq = non_f_witness_sequence(ctx.spec, c.i, c.q, c.count, loop_cap);
  ExperimentConfig local = c;
  local.n_max = c.count;
  Context inner{local, ctx.spec, ctx.prefix, ctx.out, ctx.result};
  LimitReport r = run_limit(inner, seq, cap, LimitOptions{{Word{c.i}}, true});
  ctx.result["sequence"] = seq.description();
  ctx.result["table_cap"] = cap;
  ctx.result["window_settled"] = r.max_oscillation <= c.tol;
  if (r.depth >= 2) ctx.result["classify_limit"] = to_string(classify_limit(r, cap, c.tol));
  ctx.result["limit"] = to_json(r);
}

void entropy_verb(Context& ctx) {
  const auto& c = ctx.config;
  EntropyReport r = gurevich_entropy_estimate(ctx.spec, c.a, c.n_lo, c.n_hi, c.symbol_cap,
                                              EntropyOptions{c.bits, c.use_root_loops});
  ctx.result["entropy"] = to_json(r);
  std::ostringstream csv;
  csv << "n,loops,truncated,estimate_lo,estimate_hi,decimal_display_only\n";
  for (const auto& row : r.rows) {
    csv << row.n << ',' << row.loops.get_str() << ',' << (row.truncated ? 1 : 0) << ',';
    if (row.estimate) {
      csv << to_string(row.estimate->lo()) << ',' << to_string(row.estimate->hi()) << ','
          << decimal_string(row.estimate->midpoint());
    } else {
      csv << ",,";
    }
    csv << '\n';
  }
  ctx.artifact(".csv", csv.str());
}

void flow_limit(Context& ctx) {
  const auto& c = ctx.config;
  RoofFunction tau = config_roof(c);
  MeasureSequence seq = build_sequence(c, ctx.spec);
  ctx.result["sequence"] = seq.description();
  FlowLimitReport r = flow_limit_analyze(seq, tau, c.n_max, std::max(c.depth, tau.depth()), c.symbol_cap, c.tol);
  std::vector<Rational> lo, hi, rho;
  FlowMeasure zero = FlowMeasure::zero(tau);
  Json rhos = Json::array();
  for (std::size_t n = 1; n <= c.n_max; ++n) {
    lo.push_back(r.integrals[n - 1].lo());
    hi.push_back(r.integrals[n - 1].hi());
    DistanceBracket d = flow_metric_rho(kac_lift(seq.at(n), tau), zero, c.n_terms, ctx.spec);
    rho.push_back(d.upper);
    rhos.push_back(to_json(d));
  }
  ctx.result["flow_limit"] = to_json(r);
  ctx.result["rho_to_zero"] = std::move(rhos);
  std::ostringstream csv;
  write_series_csv(csv, {"integral_lo", "integral_hi", "rho_to_zero_upper"}, {lo, hi, rho});
  ctx.artifact(".csv", csv.str());
}

void flow_escape(Context& ctx) {
  const auto& c = ctx.config;
  RoofFunction tau = config_roof(c);
  FlowEscapeCaps caps;
  caps.terms = c.count;
  caps.class_r_horizon = c.horizon;
  ctx.result["flow_escape"] = to_json(flow_escape_sequence(ctx.spec, tau, caps));
}

void densusp_verb(Context& ctx) {
  const auto& c = ctx.config;
  RoofFunction tau = config_roof(c);
  ConvexCombination target = parse_combination(c.target.empty() ? c.measure : c.target, ctx.spec);
  DensuspCaps caps{0, c.max_period, c.max_len, std::min<Symbol>(c.symbol_cap, 1024)};
  DensuspResult r = densusp_approximate(target, tau, c.eps, ctx.spec, caps);
  ctx.result["target"] = to_json(target);
  ctx.result["eps"] = to_json(c.eps);
  ctx.result["certificate"] = to_json(r);
  std::ostringstream word;
  for (std::size_t t = 0; t < r.measure.orbit().period(); ++t) word << (t ? " " : "") << r.measure.orbit().cycle()[t];
  word << '\n';
  ctx.artifact(".orbit.txt", word.str());
  if (!r.converged) {
    throw SearchExhausted("densusp: certificates not met before max_period " + std::to_string(c.max_period) +
                          "; best attempt reported");
  }
}

const char* status_name(ExitStatus s) {
  switch (s) {
    case ExitStatus::Ok:
      return "ok";
    case ExitStatus::Failure:
      return "failure";
    case ExitStatus::InvalidConfig:
      return "invalid_config";
    case ExitStatus::Partial:
      return "partial";
  }
  return "failure";
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& c) {
  RunOutcome out;
  Json result = Json::object();
  const std::string prefix = c.prefix.empty() ? (c.verb.empty() ? std::string("run") : c.verb) : c.prefix;
  std::string error;
  try {
    validate(c);
    Context ctx{c, resolve_shift(c.shift), prefix, out, result};
    const std::string& v = c.verb;
    if (v == "shift-info") shift_info(ctx);
    else if (v == "shift-check") shift_check(ctx);
    else if (v == "orbit-enum") orbit_enum(ctx);
    else if (v == "orbit-connect") orbit_connect(ctx);
    else if (v == "measure-eval") measure_eval(ctx);
    else if (v == "measure-invariance") measure_invariance(ctx);
    else if (v == "metric-d") metric_d_verb(ctx);
    else if (v == "metric-rho" || v == "flow-rho") metric_rho_verb(ctx);
    else if (v == "converge-trace") converge(ctx, false);
    else if (v == "converge-classify") converge(ctx, true);
    else if (v == "escape") escape_verb(ctx);
    else if (v == "nonf-demo") nonf_demo(ctx);
    else if (v == "entropy") entropy_verb(ctx);
    else if (v == "flow-integral") flow_integral(ctx);
    else if (v == "flow-limit") flow_limit(ctx);
    else if (v == "flow-escape") flow_escape(ctx);
    else if (v == "densusp") densusp_verb(ctx);
  } catch (const SearchExhausted& e) {
    out.status = ExitStatus::Partial;
    error = e.what();
  } catch (const GeneratorFailure& e) {
    out.status = e.exhausted() ? ExitStatus::Partial : ExitStatus::InvalidConfig;
    error = e.what();
  } catch (const InvalidArgument& e) {
    out.status = ExitStatus::InvalidConfig;
    error = e.what();
  } catch (const NotRepresented& e) {
    out.status = ExitStatus::InvalidConfig;
    error = e.what();
  } catch (const std::exception& e) {
    out.status = ExitStatus::Failure;
    error = e.what();
  }

  out.report["tool"] = "cmsctl";
  out.report["version"] = kVersion;
  out.report["config"] = to_json(c);
  out.report["status"] = status_name(out.status);
  if (!error.empty()) out.report["error"] = error;
  out.report["result"] = std::move(result);
  out.artifacts.insert(out.artifacts.begin(), Artifact{prefix + ".json", out.report.dump(2) + "\n"});
  out.summary = prefix + ": " + status_name(out.status) + (error.empty() ? "" : " (" + error + ")");
  return out;
}

std::vector<std::string> write_artifacts(const ExperimentConfig& c, const RunOutcome& out) {
  std::vector<std::string> paths;
  if (c.out_dir.empty()) return paths;
  std::filesystem::path dir(c.out_dir);
  std::filesystem::create_directories(dir);
  for (const auto& a : out.artifacts) {
    auto p = dir / a.name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + p.string() + "'");
    f << a.content;
    paths.push_back(p.string());
  }
  return paths;
}

}  // namespace cms
