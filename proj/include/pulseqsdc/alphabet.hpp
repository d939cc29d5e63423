#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "pulseqsdc/params.hpp"
#include "pulseqsdc/pulse.hpp"

namespace pulseqsdc::pulsekit {

enum class Symbol { alpha, beta, gamma, mu };

inline constexpr std::array<Symbol, 4> kAllSymbols{Symbol::alpha, Symbol::beta, Symbol::gamma, Symbol::mu};

std::string_view to_string(Symbol s);
Symbol symbol_from_string(std::string_view name);

/// The four two-bin wavepackets on [0, nT]. Bins are [0, T] and [(n-1)T, nT].
///
/// With x, y unit Gaussians in the two bins and x', y' the mixed modes
/// (x + x_perp)/sqrt(2), (y + y_perp)/sqrt(2):
///   alpha = (x + y)/sqrt(2)    gamma = (x - y)/sqrt(2)
///   beta  = (x' + y')/sqrt(2)  mu    = (x' - y')/sqrt(2)
/// alpha/beta carry bit 1, gamma/mu carry bit 0. All samples are real.
struct PulseAlphabet {
  SampledPulse alpha;
  SampledPulse beta;
  SampledPulse gamma;
  SampledPulse mu;
  double first_bin_end;      // T
  double second_bin_start;   // (n-1) T

  const SampledPulse& get(Symbol s) const;
  SampledPulse& get(Symbol s);
  const TimeGrid& grid() const { return alpha.grid; }
  double horizon() const { return alpha.grid.t_end(); }
};

/// Builds the alphabet on `grid`, which must start at 0 and end at nT.
PulseAlphabet build_alphabet(const cavity::CavityParams& params, double bin_sigma, const TimeGrid& grid);

/// Same, on the default grid for `params`.
PulseAlphabet build_alphabet(const cavity::CavityParams& params, double bin_sigma);

struct ConstraintResult {
  std::string name;
  double value;
  double expected;
  double residual;   // |value - expected|, or ratio for the quiet-middle check
  double tolerance;
  bool pass;
};

struct ConstraintReport {
  std::vector<ConstraintResult> results;

  bool all_pass() const;
  const ConstraintResult& at(std::string_view name) const;
};

/// Evaluates every alphabet constraint; never throws on violated constraints.
ConstraintReport validate_alphabet(const PulseAlphabet& alphabet);

}  // namespace pulseqsdc::pulsekit
