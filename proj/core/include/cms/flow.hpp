#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cms/escape.hpp"
#include "cms/limits.hpp"
#include "cms/metric.hpp"
#include "cms/roof.hpp"
#include "cms/shift.hpp"

namespace cms {

/// λ·φ(μ), where φ(μ) = (μ × Leb) / ∫τ dμ. λ = 0 is the zero flow measure,
/// whose base is the empty combination.
class FlowMeasure {
 public:
  FlowMeasure(ConvexCombination base, Interval integral, Rational lambda, Rational c, std::string roof_id);
  static FlowMeasure zero(const RoofFunction& tau);

  const ConvexCombination& base() const noexcept { return base_; }
  const Interval& integral() const noexcept { return integral_; }
  const Rational& lambda() const noexcept { return lambda_; }
  const Rational& c() const noexcept { return c_; }
  const std::string& roof_id() const noexcept { return roof_id_; }
  bool is_zero() const noexcept { return lambda_ == 0; }

  FlowMeasure scaled(const Rational& factor) const;

 private:
  ConvexCombination base_;
  Interval integral_;
  Rational lambda_;
  Rational c_;
  std::string roof_id_;
};

/// Throws InvalidArgument unless μ has mass 1.
FlowMeasure kac_lift(const ConvexCombination& mu, const RoofFunction& tau);
std::pair<ConvexCombination, Rational> kac_project(const FlowMeasure& nu);

/// ν(C × [0, c]) = λ·c·μ(C) / ∫τ dμ.
Interval flow_cylinder_mass(const FlowMeasure& nu, const Cylinder& c);

/// Σ_{k <= N} 2^-k |ν_1(C_k × [0,c]) − ν_2(C_k × [0,c])| enclosed, plus 2^-N.
DistanceBracket flow_metric_rho(const FlowMeasure& a, const FlowMeasure& b, std::size_t n_terms,
                                const ShiftSpec& spec);

enum class FlowVerdict { ZeroLimit, MassLambda, Undetermined };
std::string to_string(FlowVerdict v);

struct FlowLimitReport {
  /// I_n = ∫τ dμ_n for n = 1..n_max.
  std::vector<Interval> integrals;
  std::size_t window_start = 0;
  /// max hi − min lo of I_n over the window.
  Rational window_spread{0};
  /// I_{n+1} certainly exceeds I_n across the window.
  bool increasing = false;
  FlowVerdict verdict = FlowVerdict::Undetermined;
  std::optional<LimitReport> base;
  /// Σ over depth-k table words of F(w)·τ(w).
  std::optional<Interval> limit_integral;
  /// I_∞ / I_{n_max}.
  std::optional<Interval> lambda;
  /// Base limit mass within tol of 1.
  bool noescape_ok = false;
  std::string note;
};

/// Settled I_n (window spread <= tol) leads to the base cylinder limit and
/// λ; I_n still strictly increasing over the window is read as the zero flow
/// limit; anything else is Undetermined.
FlowLimitReport flow_limit_analyze(const MeasureSequence& seq, const RoofFunction& tau, std::size_t n_max,
                                   std::size_t depth, Symbol symbol_cap, const Rational& tol);

struct FlowEscapeCaps {
  std::size_t terms = 8;
  /// Probe settings for choosing the construction.
  std::size_t probe_q_max = 3;
  std::uint64_t probe_cap = 64;
  Symbol probe_symbol_cap = 256;
  /// First-return construction.
  Symbol loop_symbol_cap = 4096;
  /// Escape construction: target length step·n for term n, k = n.
  std::size_t escape_step = 10;
  EscapeCaps escape{1u << 20, 32, 1024, 2'000'000};
  std::size_t class_r_horizon = 64;
};

struct FlowEscapeResult {
  enum class Construction { EscapeOfMass, FirstReturnLoops };
  Construction construction = Construction::FirstReturnLoops;
  /// For first-return loops: the (i, q) with AtLeast evidence.
  Symbol i = 0;
  std::size_t q = 0;
  std::vector<ConvexCombination> terms;
  std::vector<Interval> integrals;
  /// Escape construction only: (1 − ν_n(∪_{s<=n}[s]))·m(n+1) <= I_n.
  std::vector<Interval> lower_bounds;
  bool increasing = false;
  MeasureSequence sequence() const;
};

/// Throws InvalidArgument on a finite alphabet or a roof failing class R at
/// the horizon, SearchExhausted when neither construction succeeds.
FlowEscapeResult flow_escape_sequence(const ShiftSpec& spec, const RoofFunction& tau, const FlowEscapeCaps& caps);

}  // namespace cms
