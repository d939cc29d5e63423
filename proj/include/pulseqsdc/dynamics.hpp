#pragma once

#include <functional>
#include <vector>

#include "pulseqsdc/control_envelope.hpp"
#include "pulseqsdc/params.hpp"
#include "pulseqsdc/pulse.hpp"

namespace pulseqsdc::cavity {

using control::ControlEnvelope;
using pulsekit::SampledPulse;
using pulsekit::TimeGrid;

/// Single-excitation amplitudes: c1 on |s>|0>, c2 on |e>|0>, c3 on |g>|1>.
struct AmplitudeState {
  cplx c1{0.0};
  cplx c2{0.0};
  cplx c3{0.0};

  double population() const { return std::norm(c1) + std::norm(c2) + std::norm(c3); }
};

struct AmplitudeTrajectory {
  TimeGrid grid;
  std::vector<AmplitudeState> states;
  SampledPulse out_pulse;  // <a_out(t)>, on `grid`

  const AmplitudeState& final_state() const { return states.back(); }
  double residual_population() const { return final_state().population(); }
  /// Probability of finding the atom in |s>, |c1|^2 at the last sample.
  double terminal_absorption() const { return std::norm(final_state().c1); }
  double absorption_at(double t) const { return std::norm(states[grid.index_at(t)].c1); }
};

struct IntegratorOptions {
  bool enforce_stability_guard = true;
};

/// Throws StabilityError when g0 * dt exceeds 0.05 on `grid`.
void check_step_stability(const TimeGrid& grid, const CavityParams& params);

/// Fixed-step RK4 of dv/dt = -i M v with
/// M = [[0, W, 0], [W, 0, g0], [0, g0, -i kappa/2]], no input field.
/// out_pulse = sqrt(kappa) c3.
AmplitudeTrajectory evolve_emission(const ControlEnvelope& control, const CavityParams& params,
                                    const AmplitudeState& initial, const IntegratorOptions& opts = {});

/// Same system driven by an input field: dc3/dt gains + sqrt(kappa) a_in.
/// out_pulse is the reflected field sqrt(kappa) c3 - a_in.
AmplitudeTrajectory evolve_absorption(const ControlEnvelope& control, const CavityParams& params,
                                      const SampledPulse& input, const AmplitudeState& initial = {},
                                      const IntegratorOptions& opts = {});

/// Absorption followed by a ramp of the control to zero over `ramp_duration`
/// (input is zero during the ramp). The terminal |c1|^2 is the absorption probability.
AmplitudeTrajectory absorb_with_ramp(const ControlEnvelope& control, const CavityParams& params,
                                     const SampledPulse& input, double ramp_duration,
                                     const AmplitudeState& initial = {});

/// Lightweight emission run starting at grid index `start` from `initial`:
/// streams every state to `sink(index, state)` and returns the final state.
/// Used by optimizers that do not need the stored trajectory.
AmplitudeState emit_streaming(const ControlEnvelope& control, const CavityParams& params,
                              const AmplitudeState& initial,
                              const std::function<void(std::size_t, const AmplitudeState&)>& sink,
                              std::size_t start = 0, const IntegratorOptions& opts = {});

/// Ramp duration used for terminal measurements: 0.05 T.
inline double default_ramp(const CavityParams& p) { return 0.05 * p.T; }

// Dark/bright basis ------------------------------------------------------------

/// cos(theta) = W / sqrt(g0^2 + W^2), sin(theta) = g0 / sqrt(g0^2 + W^2).
struct MixingAngle {
  double cos_theta;
  double sin_theta;
};
MixingAngle mixing_angle(double omega, double g0);

/// Projections on D = sin(theta)|s0> - cos(theta)|g1> and B+- = (cos|s0> +- |e0> + sin|g1>)/sqrt(2).
struct DarkBasisSeries {
  std::vector<cplx> c_dark;
  std::vector<cplx> c_zero;  // c_+ - c_-
  std::vector<cplx> c_e;     // c_+ + c_-
};
DarkBasisSeries project_dark_basis(const AmplitudeTrajectory& traj, const ControlEnvelope& control,
                                   const CavityParams& params);

struct AdiabaticityReport {
  double max_c_zero;
  double max_c_e;
  double max_theta_dot_over_g0;
  bool adiabatic;  // all three at or below the threshold
};
AdiabaticityReport adiabaticity_diagnostics(const AmplitudeTrajectory& traj, const ControlEnvelope& control,
                                            const CavityParams& params, double threshold = 0.1);

/// residual(t) = [population(t) + int_0^t |out|^2] - [population(0) + int_0^t |in|^2].
std::vector<double> flux_balance(const AmplitudeTrajectory& traj);
std::vector<double> flux_balance(const AmplitudeTrajectory& traj, const SampledPulse& input);

// Reduced dark-state model ---------------------------------------------------------

struct DarkEmission {
  std::vector<cplx> c_dark;
  SampledPulse out_pulse;
};

/// c_D(t) = c_D(0) exp[-kappa/2 int_0^t cos^2 theta], out = -sqrt(kappa) cos(theta) c_D(t).
DarkEmission dark_state_emission(const ControlEnvelope& control, const CavityParams& params, cplx c_dark0 = 1.0);

/// J(t, t') = sqrt(kappa) cos(theta(t')) exp[kappa/2 int_t^t' cos^2 theta].
/// t and t' are linearly interpolated between grid points.
double kernel_J(const ControlEnvelope& control, const CavityParams& params, double t, double t_prime);

/// J(t_end, t') at every grid point t'.
std::vector<double> kernel_J_terminal(const ControlEnvelope& control, const CavityParams& params);

/// c_D(t) = c_D(0) exp[-kappa/2 int_0^t cos^2] + int_0^t J(t, t') a_in(t') dt'.
std::vector<cplx> dark_state_absorption(const ControlEnvelope& control, const CavityParams& params,
                                        const SampledPulse& input, cplx c_dark0 = 0.0);

}  // namespace pulseqsdc::cavity
