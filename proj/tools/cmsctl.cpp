// cmsctl: command line front end for the experiment driver.
//
//   cmsctl <group> <verb> [flags]      e.g. cmsctl converge classify --sequence pair
//   cmsctl run <verb> [flags]          e.g. cmsctl run nonf-demo --i 1 --q 2
//   cmsctl run --config exp.json       verb and parameters from a file
//
// Flags override values from --config.

#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "cms/error.hpp"
#include "cms/experiment.hpp"
#include "cms/version.hpp"

namespace {

enum class Kind { Str, Count, Rat, Range, List, NoFlag };

struct FlagDef {
  std::string flag;
  std::string key;
  Kind kind;
  std::string help;
};

const std::vector<FlagDef>& flag_defs() {
  static const std::vector<FlagDef> defs{
      {"--shift", "shift", Kind::Str, "shift descriptor or @file"},
      {"--roof", "roof", Kind::Str, "log1p, const:<v> or @file"},
      {"--bits", "bits", Kind::Count, "enclosure precision in bits"},
      {"--sequence", "sequence", Kind::Str, "fixed:<comb> | delta | pair[:e] | loops:i:q | escape:k:step | densusp:<comb>"},
      {"--mix-lambda", "mix_lambda", Kind::Rat, "weight of --mix-base in the composite sequence"},
      {"--mix-base", "mix_base", Kind::Str, "combination mixed into every term"},
      {"--measure", "measure", Kind::Str, "combination such as 1/2:(1);1/2:(2), or @file.json"},
      {"--measure-b", "measure_b", Kind::Str, "second measure (or 'zero' for flow rho)"},
      {"--cylinder", "cylinders", Kind::List, "cylinder word, repeatable"},
      {"--depth", "depth", Kind::Count, "tabulation depth"},
      {"--symbol-cap", "symbol_cap", Kind::Count, "largest symbol considered"},
      {"--n-max", "n_max", Kind::Count, "number of sequence terms"},
      {"-N,--n-terms", "n_terms", Kind::Count, "metric truncation N"},
      {"--tol", "tol", Kind::Rat, "tolerance"},
      {"--i", "i", Kind::Count, "symbol i"},
      {"--q", "q", Kind::Count, "loop length q"},
      {"--count", "count", Kind::Count, "number of loops / terms"},
      {"--a", "a", Kind::Count, "root symbol a"},
      {"--n", "n", Kind::Range, "range lo..hi of n"},
      {"--k", "k", Kind::Range, "range lo..hi of k"},
      {"--target-len", "target_len", Kind::Count, "excursion length"},
      {"--target-per-k", "target_per_k", Kind::Count, "excursion length per unit of k"},
      {"--from", "from", Kind::Count, "start symbol"},
      {"--to", "to", Kind::Count, "end symbol"},
      {"--max-len", "max_len", Kind::Count, "longest connecting word"},
      {"--length", "length", Kind::Count, "word length in symbols"},
      {"--eps", "eps", Kind::Rat, "target accuracy"},
      {"--target", "target", Kind::Str, "target combination"},
      {"--max-period", "max_period", Kind::Count, "largest orbit period tried"},
      {"--no-root-loops", "use_root_loops", Kind::NoFlag, "count loops by dynamic programming only"},
      {"--horizon", "horizon", Kind::Count, "symbols 1..horizon examined"},
      {"--out-dir", "out_dir", Kind::Str, "artifact directory ('' keeps nothing)"},
      {"--prefix", "prefix", Kind::Str, "artifact base name"},
      {"--seed", "seed", Kind::Count, "recorded seed"},
  };
  return defs;
}

const std::vector<std::string> kCommon{"--shift", "--symbol-cap", "--bits", "--out-dir", "--prefix", "--seed"};
const std::vector<std::string> kSequence{"--sequence", "--mix-lambda", "--mix-base", "--depth", "--n-max",
                                         "--tol",      "--roof",       "--max-period", "--max-len"};

struct Leaf {
  std::string group;
  std::string name;
  std::string verb;
  std::string help;
  std::vector<std::string> flags;
};

std::vector<Leaf> leaves() {
  auto cat = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  return {
      {"shift", "info", "shift-info", "traits and leading rows", {}},
      {"shift", "check", "shift-check", "structure check and F-property probe",
       {"--horizon", "--max-len", "--i", "--length", "--count"}},
      {"orbit", "enum", "orbit-enum", "loops at a symbol", {"--a", "--length", "--count"}},
      {"orbit", "connect", "orbit-connect", "shortest connecting word", {"--from", "--to", "--max-len"}},
      {"measure", "eval", "measure-eval", "cylinder values", {"--measure", "--cylinder", "-N,--n-terms"}},
      {"measure", "invariance", "measure-invariance", "invariance defects", {"--measure", "--depth"}},
      {"metric", "d", "metric-d", "metric on cylinders", {"--measure", "--measure-b", "-N,--n-terms"}},
      {"metric", "rho", "metric-rho", "flow metric", {"--measure", "--measure-b", "-N,--n-terms", "--roof"}},
      {"converge", "trace", "converge-trace", "cylinder traces of a sequence", cat(kSequence, {"--cylinder"})},
      {"converge", "classify", "converge-classify", "limit table and classification",
       cat(kSequence, {"--cylinder"})},
      {"", "escape", "escape", "escape-of-mass certificates", {"--k", "--target-len", "--target-per-k", "--max-len"}},
      {"", "nonf-demo", "nonf-demo", "first-return loop sequence and its defect",
       {"--i", "--q", "--count", "--depth", "--tol"}},
      {"", "entropy", "entropy", "loop counts and entropy estimates", {"--a", "--n", "--no-root-loops"}},
      {"flow", "integral", "flow-integral", "roof integral and flow cylinder masses",
       {"--measure", "--roof", "--cylinder", "--horizon"}},
      {"flow", "rho", "flow-rho", "flow metric", {"--measure", "--measure-b", "-N,--n-terms", "--roof"}},
      {"flow", "limit", "flow-limit", "flow limit of a sequence", cat(kSequence, {"-N,--n-terms"})},
      {"flow", "escape", "flow-escape", "sequence with growing roof integrals", {"--roof", "--count", "--horizon"}},
      {"", "densusp", "densusp", "single orbit approximating a combination",
       {"--target", "--measure", "--roof", "--eps", "--max-period", "--max-len"}},
  };
}

// "run converge-classify" and "run nonf-demo" both name a leaf verb.
std::vector<std::string> normalize(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args[0] == "run") args.erase(args.begin());
  if (!args.empty()) {
    for (const auto& l : leaves()) {
      if (!l.group.empty() && args[0] == l.verb) {
        args[0] = l.name;
        args.insert(args.begin(), l.group);
        break;
      }
    }
  }
  return args;
}

cms::Json flag_value(const FlagDef& d, const std::string& raw) {
  switch (d.kind) {
    case Kind::Count: {
      cms::Rational v = cms::parse_rational(raw);
      if (v.get_den() != 1 || v < 0) throw cms::InvalidArgument(d.flag + " expects a nonnegative integer");
      return cms::Json(v.get_num().get_ui());
    }
    default:
      return cms::Json(raw);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmsctl " + std::string(cms::kVersion) + ": invariant measures on countable Markov shifts"};
  app.set_version_flag("--version", std::string(cms::kVersion));
  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment file")->check(CLI::ExistingFile);

  std::map<std::string, const FlagDef*> by_flag;
  for (const auto& d : flag_defs()) by_flag[d.flag] = &d;

  struct Bound {
    CLI::App* app;
    std::string verb;
    std::map<std::string, std::string> scalars;
    std::vector<std::string> list;
    bool no_flag = false;
    std::vector<std::pair<const FlagDef*, CLI::Option*>> options;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  std::map<std::string, CLI::App*> groups;

  for (const auto& leaf : leaves()) {
    CLI::App* parent = &app;
    if (!leaf.group.empty()) {
      auto it = groups.find(leaf.group);
      if (it == groups.end()) {
        it = groups.emplace(leaf.group, app.add_subcommand(leaf.group, leaf.group + " verbs")).first;
        it->second->require_subcommand(1);
      }
      parent = it->second;
    }
    auto b = std::make_unique<Bound>();
    b->app = parent->add_subcommand(leaf.name, leaf.help);
    b->verb = leaf.verb;
    b->app->add_option("--config", config_path, "JSON experiment file")->check(CLI::ExistingFile);
    std::vector<std::string> flags = kCommon;
    flags.insert(flags.end(), leaf.flags.begin(), leaf.flags.end());
    std::set<std::string> added;
    for (const auto& f : flags) {
      if (!added.insert(f).second) continue;
      const FlagDef* d = by_flag.at(f);
      CLI::Option* opt = nullptr;
      if (d->kind == Kind::List) {
        opt = b->app->add_option(d->flag, b->list, d->help);
      } else if (d->kind == Kind::NoFlag) {
        opt = b->app->add_flag(d->flag, b->no_flag, d->help);
      } else {
        opt = b->app->add_option(d->flag, b->scalars[d->key], d->help);
      }
      b->options.emplace_back(d, opt);
    }
    bound.push_back(std::move(b));
  }
  app.require_subcommand(0, 1);

  std::vector<std::string> args = normalize(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(cms::ExitStatus::InvalidConfig);
  }

  try {
    cms::Json j = cms::Json::object();
    if (!config_path.empty()) {
      cms::ExperimentConfig from_file = cms::load_config_file(config_path);
      j = cms::to_json(from_file);
    }
    const Bound* chosen = nullptr;
    for (const auto& b : bound) {
      if (b->app->parsed()) chosen = b.get();
    }
    if (chosen) {
      j["verb"] = chosen->verb;
      for (const auto& [d, opt] : chosen->options) {
        if (opt->count() == 0) continue;
        if (d->kind == Kind::List) {
          j[d->key] = chosen->list;
        } else if (d->kind == Kind::NoFlag) {
          j[d->key] = false;
        } else if (d->kind == Kind::Range) {
          auto [lo, hi] = cms::parse_range(chosen->scalars.at(d->key));
          j[d->key + "_lo"] = lo;
          j[d->key + "_hi"] = hi;
        } else {
          j[d->key] = flag_value(*d, chosen->scalars.at(d->key));
        }
      }
    } else if (config_path.empty()) {
      std::cout << app.help();
      return static_cast<int>(cms::ExitStatus::InvalidConfig);
    }
    cms::ExperimentConfig config = cms::config_from_json(j);
    cms::RunOutcome out = cms::run_experiment(config);
    auto paths = cms::write_artifacts(config, out);
    std::cout << out.summary << '\n';
    if (paths.empty()) {
      std::cout << out.report.dump(2) << '\n';
    } else {
      for (const auto& p : paths) std::cout << "  wrote " << p << '\n';
    }
    return static_cast<int>(out.status);
  } catch (const cms::InvalidArgument& e) {
    std::cerr << "cmsctl: " << e.what() << '\n';
    return static_cast<int>(cms::ExitStatus::InvalidConfig);
  } catch (const std::exception& e) {
    std::cerr << "cmsctl: " << e.what() << '\n';
    return static_cast<int>(cms::ExitStatus::Failure);
  }
}
