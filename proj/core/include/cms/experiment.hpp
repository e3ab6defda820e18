#pragma once
// Batch driver: one declarative config names a verb, a shift, an optional
// roof, a sequence constructor and its horizons, and produces a JSON report
// plus CSV/word artifacts. Output depends only on the config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cms/serialize.hpp"

namespace cms {

enum class ExitStatus : int { Ok = 0, Failure = 1, InvalidConfig = 2, Partial = 3 };

struct ExperimentConfig {
  std::string verb;
  std::string shift = "full";
  std::optional<std::string> roof;
  unsigned bits = 80;

  /// fixed:<combination> | delta | pair | pair:<e> | loops:<i>:<q> |
  /// escape:<k>:<step> | densusp:<combination>
  std::string sequence;
  std::optional<Rational> mix_lambda;
  std::optional<std::string> mix_base;

  std::string measure;
  std::string measure_b;
  std::vector<std::string> cylinders;

  std::size_t depth = 2;
  Symbol symbol_cap = 64;
  std::size_t n_max = 50;
  std::size_t n_terms = 20;
  Rational tol{1, 1000};

  Symbol i = 1;
  std::size_t q = 2;
  std::size_t count = 50;
  Symbol a = 1;
  std::size_t n_lo = 1;
  std::size_t n_hi = 12;
  Symbol k_lo = 1;
  Symbol k_hi = 1;
  std::size_t target_len = 100;
  /// When nonzero, term k uses target_len = target_per_k·k.
  std::size_t target_per_k = 0;
  Symbol from = 1;
  Symbol to = 1;
  std::size_t max_len = 32;
  std::size_t length = 3;
  Rational eps{1, 1000};
  std::string target;
  std::size_t max_period = 1u << 22;
  bool use_root_loops = true;
  /// shift-check: symbols 1..horizon are examined.
  Symbol horizon = 16;

  /// Empty: keep artifacts in memory only.
  std::string out_dir = ".";
  /// Artifact base name; defaults to the verb.
  std::string prefix;
  /// Recorded in the echo. Every search in the library is deterministic.
  std::uint64_t seed = 0;
};

/// The verbs run_experiment accepts, e.g. "converge-classify".
const std::vector<std::string>& experiment_verbs();

Json to_json(const ExperimentConfig& c);
/// Unknown keys are rejected.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config_file(const std::string& path);

/// "lo..hi" or a single value.
std::pair<std::size_t, std::size_t> parse_range(std::string_view text);

/// Throws InvalidArgument for non-positive horizons, tol <= 0, an unknown
/// verb, or unresolvable shift/roof/sequence references.
void validate(const ExperimentConfig& c);

MeasureSequence build_sequence(const ExperimentConfig& c, const ShiftSpec& spec);

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOutcome {
  ExitStatus status = ExitStatus::Ok;
  /// {"tool", "version", "config", "status", "result" | "error"}.
  Json report;
  /// The report is always the first artifact, "<prefix>.json".
  std::vector<Artifact> artifacts;
  /// One line for the terminal.
  std::string summary;
};

/// Never throws for library errors: they become InvalidConfig (bad input),
/// Partial (search caps exhausted) or Failure, with the message in the report.
RunOutcome run_experiment(const ExperimentConfig& c);

/// Writes every artifact under c.out_dir. Returns the paths written.
std::vector<std::string> write_artifacts(const ExperimentConfig& c, const RunOutcome& out);

}  // namespace cms
