#include "pulseqsdc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pulseqsdc/errors.hpp"

namespace pulseqsdc::cavity {
namespace {

inline cplx minus_i(cplx z) { return {z.imag(), -z.real()}; }

struct Deriv {
  double g0;
  double half_kappa;
  double sqrt_kappa;

  AmplitudeState operator()(const AmplitudeState& s, double w, cplx a_in) const {
    return {minus_i(w * s.c2),
            minus_i(w * s.c1 + g0 * s.c3),
            -half_kappa * s.c3 + minus_i(g0 * s.c2) + sqrt_kappa * a_in};
  }
};

inline AmplitudeState axpy(const AmplitudeState& s, double h, const AmplitudeState& k) {
  return {s.c1 + h * k.c1, s.c2 + h * k.c2, s.c3 + h * k.c3};
}

// Value halfway between samples k and k+1 (cubic, quadratic at the edges).
template <class V>
V midpoint(const std::vector<V>& v, std::size_t k) {
  const std::size_t n = v.size();
  if (n == 2) return 0.5 * (v[0] + v[1]);
  if (k == 0) return (3.0 * v[0] + 6.0 * v[1] - v[2]) / 8.0;
  if (k + 2 == n) return (3.0 * v[n - 1] + 6.0 * v[n - 2] - v[n - 3]) / 8.0;
  return (-v[k - 1] + 9.0 * v[k] + 9.0 * v[k + 1] - v[k + 2]) / 16.0;
}

void check_params(const CavityParams& p) {
  if (!(std::isfinite(p.g0) && p.g0 >= 0.0) || !(std::isfinite(p.kappa) && p.kappa >= 0.0)) {
    throw std::invalid_argument("integrator requires finite g0 >= 0 and kappa >= 0");
  }
}

// Integrates from `initial`; calls sink(k, state, a_in_k) for every grid index.
template <class Sink>
AmplitudeState integrate(const ControlEnvelope& control, const CavityParams& params, const std::vector<cplx>* input,
                         const AmplitudeState& initial, const IntegratorOptions& opts, Sink&& sink,
                         std::size_t start = 0) {
  check_params(params);
  if (opts.enforce_stability_guard) check_step_stability(control.grid, params);
  const Deriv f{params.g0, 0.5 * params.kappa, std::sqrt(params.kappa)};
  const std::size_t n = control.size();
  const double h = control.grid.dt();
  const auto& w = control.omega;
  auto a_at = [&](std::size_t k) { return input ? (*input)[k] : cplx{}; };

  if (start >= n) throw std::invalid_argument("start index outside the grid");
  AmplitudeState s = initial;
  sink(start, s, a_at(start));
  for (std::size_t k = start; k + 1 < n; ++k) {
    const double w_mid = midpoint(w, k);
    const cplx a_mid = input ? midpoint(*input, k) : cplx{};
    const AmplitudeState k1 = f(s, w[k], a_at(k));
    const AmplitudeState k2 = f(axpy(s, 0.5 * h, k1), w_mid, a_mid);
    const AmplitudeState k3 = f(axpy(s, 0.5 * h, k2), w_mid, a_mid);
    const AmplitudeState k4 = f(axpy(s, h, k3), w[k + 1], a_at(k + 1));
    const double h6 = h / 6.0;
    s.c1 += h6 * (k1.c1 + 2.0 * (k2.c1 + k3.c1) + k4.c1);
    s.c2 += h6 * (k1.c2 + 2.0 * (k2.c2 + k3.c2) + k4.c2);
    s.c3 += h6 * (k1.c3 + 2.0 * (k2.c3 + k3.c3) + k4.c3);
    sink(k + 1, s, a_at(k + 1));
  }
  return s;
}

AmplitudeTrajectory run(const ControlEnvelope& control, const CavityParams& params, const SampledPulse* input,
                        const AmplitudeState& initial, const IntegratorOptions& opts) {
  AmplitudeTrajectory traj{control.grid, {}, SampledPulse::zeros(control.grid)};
  traj.states.resize(control.size());
  const double sk = std::sqrt(params.kappa);
  integrate(control, params, input ? &input->amps : nullptr, initial, opts,
            [&](std::size_t k, const AmplitudeState& s, cplx a) {
              traj.states[k] = s;
              traj.out_pulse.amps[k] = sk * s.c3 - a;
            });
  return traj;
}

}  // namespace

void check_step_stability(const TimeGrid& grid, const CavityParams& params) {
  const double g_dt = params.g0 * grid.dt();
  if (g_dt > kMaxCouplingStep * (1.0 + 1e-9)) {
    const auto needed = static_cast<std::size_t>(std::ceil(params.g0 * grid.span() / kMaxCouplingStep)) + 1;
    throw StabilityError("step too coarse: g0*dt = " + std::to_string(g_dt) + " > 0.05; use at least " +
                             std::to_string(needed) + " samples on this span",
                         needed);
  }
}

AmplitudeTrajectory evolve_emission(const ControlEnvelope& control, const CavityParams& params,
                                    const AmplitudeState& initial, const IntegratorOptions& opts) {
  if (std::abs(initial.population() - 1.0) > 1e-9) {
    throw std::invalid_argument("emission needs a normalized initial state");
  }
  return run(control, params, nullptr, initial, opts);
}

AmplitudeTrajectory evolve_absorption(const ControlEnvelope& control, const CavityParams& params,
                                      const SampledPulse& input, const AmplitudeState& initial,
                                      const IntegratorOptions& opts) {
  if (!input.grid.matches(control.grid)) throw std::invalid_argument("input and control grids differ");
  if (initial.population() > 1.0 + 1e-9) throw std::invalid_argument("initial state population exceeds 1");
  return run(control, params, &input, initial, opts);
}

AmplitudeTrajectory absorb_with_ramp(const ControlEnvelope& control, const CavityParams& params,
                                     const SampledPulse& input, double ramp_duration, const AmplitudeState& initial) {
  const ControlEnvelope ramped = control::with_ramp_down(control, ramp_duration);
  return evolve_absorption(ramped, params, pulsekit::zero_extended(input, ramped.grid), initial);
}

AmplitudeState emit_streaming(const ControlEnvelope& control, const CavityParams& params,
                              const AmplitudeState& initial,
                              const std::function<void(std::size_t, const AmplitudeState&)>& sink, std::size_t start,
                              const IntegratorOptions& opts) {
  return integrate(
      control, params, nullptr, initial, opts, [&](std::size_t k, const AmplitudeState& s, cplx) { sink(k, s); },
      start);
}

MixingAngle mixing_angle(double omega, double g0) {
  const double r = std::hypot(g0, omega);
  if (r == 0.0) return {0.0, 1.0};
  return {omega / r, g0 / r};
}

DarkBasisSeries project_dark_basis(const AmplitudeTrajectory& traj, const ControlEnvelope& control,
                                   const CavityParams& params) {
  if (!traj.grid.matches(control.grid)) throw std::invalid_argument("trajectory and control grids differ");
  DarkBasisSeries out;
  const std::size_t n = traj.states.size();
  out.c_dark.resize(n);
  out.c_zero.resize(n);
  out.c_e.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [c, s] = mixing_angle(control.omega[k], params.g0);
    const AmplitudeState& st = traj.states[k];
    out.c_dark[k] = s * st.c1 - c * st.c3;
    out.c_zero[k] = std::sqrt(2.0) * st.c2;
    out.c_e[k] = std::sqrt(2.0) * (c * st.c1 + s * st.c3);
  }
  return out;
}

AdiabaticityReport adiabaticity_diagnostics(const AmplitudeTrajectory& traj, const ControlEnvelope& control,
                                            const CavityParams& params, double threshold) {
  const DarkBasisSeries proj = project_dark_basis(traj, control, params);
  AdiabaticityReport r{0.0, 0.0, 0.0, true};
  for (std::size_t k = 0; k < proj.c_dark.size(); ++k) {
    r.max_c_zero = std::max(r.max_c_zero, std::abs(proj.c_zero[k]));
    r.max_c_e = std::max(r.max_c_e, std::abs(proj.c_e[k]));
  }
  if (params.g0 > 0.0) {
    const double dt = control.grid.dt();
    double prev = std::atan2(params.g0, control.omega[0]);
    for (std::size_t k = 1; k < control.size(); ++k) {
      const double th = std::atan2(params.g0, control.omega[k]);
      r.max_theta_dot_over_g0 = std::max(r.max_theta_dot_over_g0, std::abs(th - prev) / dt / params.g0);
      prev = th;
    }
  }
  r.adiabatic = r.max_c_zero <= threshold && r.max_c_e <= threshold && r.max_theta_dot_over_g0 <= threshold;
  return r;
}

namespace {

std::vector<double> balance(const AmplitudeTrajectory& traj, const std::vector<cplx>* input) {
  const std::size_t n = traj.states.size();
  std::vector<double> res(n, 0.0);
  const double dt = traj.grid.dt();
  const double p0 = traj.states[0].population();
  double flux = 0.0;  // int |out|^2 - |in|^2
  auto density = [&](std::size_t k) {
    double d = std::norm(traj.out_pulse.amps[k]);
    if (input) d -= std::norm((*input)[k]);
    return d;
  };
  double prev = density(0);
  for (std::size_t k = 1; k < n; ++k) {
    const double cur = density(k);
    flux += 0.5 * dt * (prev + cur);
    prev = cur;
    res[k] = traj.states[k].population() + flux - p0;
  }
  return res;
}

}  // namespace

std::vector<double> flux_balance(const AmplitudeTrajectory& traj) { return balance(traj, nullptr); }

std::vector<double> flux_balance(const AmplitudeTrajectory& traj, const SampledPulse& input) {
  if (!input.grid.matches(traj.grid)) throw std::invalid_argument("input and trajectory grids differ");
  return balance(traj, &input.amps);
}

}  // namespace pulseqsdc::cavity
