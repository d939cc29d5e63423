#pragma once

#include <span>
#include <string>
#include <vector>

#include "pulseqsdc/control_envelope.hpp"
#include "pulseqsdc/dynamics.hpp"
#include "pulseqsdc/params.hpp"
#include "pulseqsdc/pulse.hpp"

namespace pulseqsdc::control {

using cavity::CavityParams;
using pulsekit::SampledPulse;

/// Regularization of the emission inversion, which is singular when the
/// remaining population goes to zero or the target vanishes.
struct InversionLimits {
  double population_floor = 1e-6;
  double sin_floor = 1e-3;
  double omega_cap_over_g0 = 10.0;
};

/// Population withheld from every shaped target so the inversion never reaches
/// the singular end point: targets are rescaled to 1 - 1e-3 before inversion.
inline constexpr double kTargetReserve = 1e-3;

struct EmissionScore {
  double fidelity = 0.0;        // |<out/|out|, target/|target|>|^2
  double l2_error = 0.0;        // ||out - target||
  double l2_error_aligned = 0.0;  // same after the best global phase
  double emitted_norm = 0.0;    // int |out|^2
  double residual_population = 0.0;  // population left in the node at the end
  bool zero_output = false;
};

/// Simulates `control` with the full model from |s>|0> and scores the output against `target`.
EmissionScore emission_fidelity(const ControlEnvelope& control, const SampledPulse& target,
                                const CavityParams& params);

struct InversionReport {
  ControlEnvelope control;
  double infidelity = 1.0;  // 1 - fidelity of the forward simulation
  double clamp_fraction = 0.0;
  double residual_population = 0.0;  // population left after the forward run
  EmissionScore score;
  bool improved = false;  // refinement only: accepted at least one step
  std::size_t evaluations = 0;
  std::string note;
};

/// Closed-form Omega(t) for the dark-state output formula, without the forward check.
/// Throws std::invalid_argument when int |target|^2 > 1 and NumericalError when the
/// target would need cos^2(theta) > 1 (names the time).
ControlEnvelope analytic_control(const SampledPulse& target, const CavityParams& params,
                                 const InversionLimits& limits = {}, double* clamp_fraction = nullptr);

/// analytic_control() plus a full-model forward simulation of the result. Targets with
/// norm above 1 - kTargetReserve are rescaled to 1 - kTargetReserve first.
InversionReport invert_emission(const SampledPulse& target, const CavityParams& params,
                                const InversionLimits& limits = {});

struct RefineOptions {
  std::size_t knots = 64;
  std::size_t max_evaluations = 300;
  double initial_step = 0.05;  // in log(Omega)
  double min_step = 1e-3;
  double tolerance = 1e-10;    // minimum accepted decrease of the objective
};

/// Derivative-free coordinate descent on log-domain knots multiplying the seed
/// (Omega = seed * exp(delta(t)), delta monotone-cubic between knots). The
/// objective is the phase-aligned squared L2 distance between the full-model
/// output and `target`. Never returns a control scoring worse than the seed.
InversionReport refine_control(const ControlEnvelope& seed, const SampledPulse& target, const CavityParams& params,
                               const RefineOptions& opts = {});

struct CatchOptions {
  bool refine = false;
  RefineOptions refine_options{};
  InversionLimits limits{};
  bool verify = true;  // run evolve_absorption on the input and record the result
};

struct CatchResult {
  ControlEnvelope control;   // on the input's grid, no ramp
  double verified_absorption = -1.0;  // |c1|^2 after the ramp, -1 if not verified
};

/// Drive that absorbs `input`: invert the emission of the time-reversed,
/// conjugated, unit-normalized input and reverse the resulting control. The sign
/// is chosen so that the matched input is caught with dark-state amplitude +1.
CatchResult catch_control(const SampledPulse& input, const CavityParams& params, const CatchOptions& opts = {});

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolation of knots (x_i, y_i).
std::vector<double> pchip_slopes(std::span<const double> xs, std::span<const double> ys);
double pchip_eval(std::span<const double> xs, std::span<const double> ys, std::span<const double> slopes, double x);
double pchip(std::span<const double> xs, std::span<const double> ys, double x);

}  // namespace pulseqsdc::control
