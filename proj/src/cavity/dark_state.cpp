#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulseqsdc/dynamics.hpp"

namespace pulseqsdc::cavity {
namespace {

struct AngleSeries {
  std::vector<double> cos_theta;
  std::vector<double> cum_cos2;  // int_0^t cos^2 theta
};

AngleSeries angle_series(const ControlEnvelope& control, const CavityParams& params) {
  AngleSeries a;
  const std::size_t n = control.size();
  a.cos_theta.resize(n);
  std::vector<double> cos2(n);
  for (std::size_t k = 0; k < n; ++k) {
    a.cos_theta[k] = mixing_angle(control.omega[k], params.g0).cos_theta;
    cos2[k] = a.cos_theta[k] * a.cos_theta[k];
  }
  a.cum_cos2 = pulsekit::cumulative_trapezoid(cos2, control.grid.dt());
  return a;
}

double interpolate(const std::vector<double>& v, const TimeGrid& g, double t) {
  if (!g.contains(t)) throw std::invalid_argument("time outside the control grid");
  const double x = std::clamp((t - g.t_start()) / g.dt(), 0.0, static_cast<double>(g.size() - 1));
  const auto i = static_cast<std::size_t>(std::floor(x));
  if (i + 1 >= v.size()) return v.back();
  const double frac = x - static_cast<double>(i);
  return (1.0 - frac) * v[i] + frac * v[i + 1];
}

}  // namespace

DarkEmission dark_state_emission(const ControlEnvelope& control, const CavityParams& params, cplx c_dark0) {
  const AngleSeries a = angle_series(control, params);
  const double sk = std::sqrt(params.kappa);
  DarkEmission out{std::vector<cplx>(control.size()), SampledPulse::zeros(control.grid)};
  for (std::size_t k = 0; k < control.size(); ++k) {
    out.c_dark[k] = c_dark0 * std::exp(-0.5 * params.kappa * a.cum_cos2[k]);
    out.out_pulse.amps[k] = -sk * a.cos_theta[k] * out.c_dark[k];
  }
  return out;
}

double kernel_J(const ControlEnvelope& control, const CavityParams& params, double t, double t_prime) {
  const AngleSeries a = angle_series(control, params);
  const double c_t = interpolate(a.cum_cos2, control.grid, t);
  const double c_tp = interpolate(a.cum_cos2, control.grid, t_prime);
  const double cos_tp = interpolate(a.cos_theta, control.grid, t_prime);
  return std::sqrt(params.kappa) * cos_tp * std::exp(0.5 * params.kappa * (c_tp - c_t));
}

std::vector<double> kernel_J_terminal(const ControlEnvelope& control, const CavityParams& params) {
  const AngleSeries a = angle_series(control, params);
  const double sk = std::sqrt(params.kappa);
  const double c_end = a.cum_cos2.back();
  std::vector<double> j(control.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    j[k] = sk * a.cos_theta[k] * std::exp(-0.5 * params.kappa * (c_end - a.cum_cos2[k]));
  }
  return j;
}

std::vector<cplx> dark_state_absorption(const ControlEnvelope& control, const CavityParams& params,
                                        const SampledPulse& input, cplx c_dark0) {
  if (!input.grid.matches(control.grid)) throw std::invalid_argument("input and control grids differ");
  const AngleSeries a = angle_series(control, params);
  const double sk = std::sqrt(params.kappa);
  const double dt = control.grid.dt();
  const std::size_t n = control.size();
  std::vector<cplx> c(n);
  c[0] = c_dark0;
  // Stepwise form of the integral solution; identical to the composite trapezoid
  // of int_0^t J(t,t') a_in(t') dt' without overflowing exponentials.
  cplx h_prev = sk * a.cos_theta[0] * input.amps[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double decay = std::exp(-0.5 * params.kappa * (a.cum_cos2[k] - a.cum_cos2[k - 1]));
    const cplx h = sk * a.cos_theta[k] * input.amps[k];
    c[k] = c[k - 1] * decay + 0.5 * dt * (h_prev * decay + h);
    h_prev = h;
  }
  return c;
}

}  // namespace pulseqsdc::cavity
