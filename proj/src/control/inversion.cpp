#include "pulseqsdc/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pulseqsdc/errors.hpp"

namespace pulseqsdc::control {

EmissionScore emission_fidelity(const ControlEnvelope& control, const SampledPulse& target,
                                const CavityParams& params) {
  if (!control.grid.matches(target.grid)) throw std::invalid_argument("control and target grids differ");
  const auto traj = cavity::evolve_emission(control, params, {1.0, 0.0, 0.0});
  EmissionScore s;
  s.emitted_norm = pulsekit::norm_squared(traj.out_pulse);
  s.residual_population = traj.residual_population();
  s.l2_error = pulsekit::l2_distance(traj.out_pulse, target);
  s.l2_error_aligned = pulsekit::l2_distance_phase_aligned(target, traj.out_pulse);
  const double target_norm = pulsekit::norm_squared(target);
  if (s.emitted_norm <= 1e-300 || target_norm <= 1e-300) {
    s.zero_output = s.emitted_norm <= 1e-300;
    s.fidelity = 0.0;
    return s;
  }
  s.fidelity = std::norm(pulsekit::overlap(target, traj.out_pulse)) / (s.emitted_norm * target_norm);
  s.fidelity = std::clamp(s.fidelity, 0.0, 1.0);
  return s;
}

ControlEnvelope analytic_control(const SampledPulse& target, const CavityParams& params,
                                 const InversionLimits& limits, double* clamp_fraction) {
  const double total = pulsekit::norm_squared(target);
  if (total > 1.0 + 1e-6) {
    throw std::invalid_argument("target carries more than one photon (int |f|^2 = " + std::to_string(total) + ")");
  }
  const std::size_t n = target.size();
  const double dt = target.grid.dt();

  // Global phase taken at the peak; the sign of the remaining real part sets the drive phase.
  std::size_t peak = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(target.amps[k]) > std::abs(target.amps[peak])) peak = k;
  }
  const cplx unphase = std::abs(target.amps[peak]) > 0.0 ? std::conj(target.amps[peak]) / std::abs(target.amps[peak])
                                                         : cplx{1.0};

  std::vector<double> density(n);
  for (std::size_t k = 0; k < n; ++k) density[k] = std::norm(target.amps[k]);
  const std::vector<double> emitted = pulsekit::cumulative_trapezoid(density, dt);

  const double cap = limits.omega_cap_over_g0 * params.g0;
  std::vector<double> omega(n, 0.0);
  std::size_t clamped = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double remaining = 1.0 - emitted[k];
    bool hit = remaining < limits.population_floor;
    double cos2 = density[k] / (params.kappa * std::max(remaining, limits.population_floor));
    if (cos2 > 1.0 + 1e-9) {
      if (!hit) {
        throw NumericalError("target too fast for the cavity: needs cos^2(theta) = " + std::to_string(cos2) +
                             " > 1 at t = " + std::to_string(target.time(k)));
      }
    }
    cos2 = std::min(cos2, 1.0);
    const double cos_t = std::sqrt(cos2);
    const double sin_t = std::sqrt(1.0 - cos2);
    if (sin_t < limits.sin_floor) hit = true;
    double w = params.g0 * cos_t / std::max(sin_t, limits.sin_floor);
    if (w > cap) {
      w = cap;
      hit = true;
    }
    const double sign = (target.amps[k] * unphase).real() < 0.0 ? -1.0 : 1.0;
    omega[k] = sign * w;
    if (hit) ++clamped;
  }
  if (clamp_fraction) *clamp_fraction = static_cast<double>(clamped) / static_cast<double>(n);
  return ControlEnvelope(target.grid, std::move(omega));
}

InversionReport invert_emission(const SampledPulse& target, const CavityParams& params,
                                const InversionLimits& limits) {
  double clamp = 0.0;
  // Keep a little population in the node so the closed form never reaches its singular end point.
  const double norm = pulsekit::norm_squared(target);
  const SampledPulse shaped = norm > 1.0 - kTargetReserve && norm <= 1.0 + 1e-6
                                  ? pulsekit::with_norm_squared(target, 1.0 - kTargetReserve)
                                  : target;
  InversionReport r{analytic_control(shaped, params, limits, &clamp), 1.0, 0.0, 0.0, {}, false, 0, {}};
  r.clamp_fraction = clamp;
  r.score = emission_fidelity(r.control, target, params);
  r.residual_population = r.score.residual_population;
  r.infidelity = 1.0 - r.score.fidelity;
  r.evaluations = 1;
  return r;
}

std::vector<double> pchip_slopes(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n == 0) throw std::invalid_argument("pchip: knot arrays mismatch");
  std::vector<double> m(n, 0.0);
  if (n == 1) return m;
  auto secant = [&](std::size_t j) { return (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]); };
  if (n == 2) {
    m[0] = m[1] = secant(0);
    return m;
  }
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double d0 = secant(j - 1);
    const double d1 = secant(j);
    if (d0 * d1 <= 0.0) continue;
    const double w1 = 2.0 * (xs[j + 1] - xs[j]) + (xs[j] - xs[j - 1]);
    const double w2 = (xs[j + 1] - xs[j]) + 2.0 * (xs[j] - xs[j - 1]);
    m[j] = (w1 + w2) / (w1 / d0 + w2 / d1);
  }
  // One-sided three-point end slopes, limited to preserve monotonicity.
  auto end_slope = [&](double h0, double h1, double d0, double d1) {
    double e = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (e * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(e) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return e;
  };
  m[0] = end_slope(xs[1] - xs[0], xs[2] - xs[1], secant(0), secant(1));
  m[n - 1] = end_slope(xs[n - 1] - xs[n - 2], xs[n - 2] - xs[n - 3], secant(n - 2), secant(n - 3));
  return m;
}

double pchip_eval(std::span<const double> xs, std::span<const double> ys, std::span<const double> slopes, double x) {
  const std::size_t n = xs.size();
  if (n == 1 || x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ys[i] + (t3 - 2 * t2 + t) * h * slopes[i] + (-2 * t3 + 3 * t2) * ys[i + 1] +
         (t3 - t2) * h * slopes[i + 1];
}

double pchip(std::span<const double> xs, std::span<const double> ys, double x) {
  return pchip_eval(xs, ys, pchip_slopes(xs, ys), x);
}

}  // namespace pulseqsdc::control
