#include "pulseqsdc/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulseqsdc::pulsekit {

SampledPulse::SampledPulse(TimeGrid g, std::vector<cplx> a) : grid(g), amps(std::move(a)) {
  if (amps.size() != grid.size()) {
    throw std::invalid_argument("pulse sample count does not match its grid");
  }
}

SampledPulse SampledPulse::zeros(const TimeGrid& g) { return SampledPulse(g, std::vector<cplx>(g.size())); }

double trapezoid(std::span<const double> y, double dt) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dt;
}

cplx trapezoid(std::span<const cplx> y, double dt) {
  if (y.size() < 2) return 0.0;
  cplx s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dt;
}

std::vector<double> cumulative_trapezoid(std::span<const double> y, double dt) {
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) out[i] = out[i - 1] + 0.5 * dt * (y[i - 1] + y[i]);
  return out;
}

namespace {

void require_same_grid(const SampledPulse& a, const SampledPulse& b) {
  if (!a.grid.matches(b.grid)) throw std::invalid_argument("pulses are sampled on different grids");
}

std::pair<std::size_t, std::size_t> index_range(const TimeGrid& g, double t0, double t1) {
  if (t1 < t0) std::swap(t0, t1);
  return {g.index_at(t0), g.index_at(t1)};
}

}  // namespace

double norm_squared(const SampledPulse& f) {
  return norm_squared_between(f, f.grid.t_start(), f.grid.t_end());
}

double norm_squared_between(const SampledPulse& f, double a, double b) {
  const auto [i0, i1] = index_range(f.grid, a, b);
  if (i1 <= i0) return 0.0;
  double s = 0.5 * (std::norm(f.amps[i0]) + std::norm(f.amps[i1]));
  for (std::size_t i = i0 + 1; i < i1; ++i) s += std::norm(f.amps[i]);
  return s * f.grid.dt();
}

cplx overlap(const SampledPulse& a, const SampledPulse& b) {
  return overlap_between(a, b, a.grid.t_start(), a.grid.t_end());
}

cplx overlap_between(const SampledPulse& a, const SampledPulse& b, double t0, double t1) {
  require_same_grid(a, b);
  const auto [i0, i1] = index_range(a.grid, t0, t1);
  if (i1 <= i0) return 0.0;
  cplx s = 0.5 * (std::conj(a.amps[i0]) * b.amps[i0] + std::conj(a.amps[i1]) * b.amps[i1]);
  for (std::size_t i = i0 + 1; i < i1; ++i) s += std::conj(a.amps[i]) * b.amps[i];
  return s * a.grid.dt();
}

double l2_distance(const SampledPulse& a, const SampledPulse& b) {
  return std::sqrt(norm_squared(added(a, b, -1.0)));
}

double l2_distance_phase_aligned(const SampledPulse& a, const SampledPulse& b) {
  const double d2 = norm_squared(a) + norm_squared(b) - 2.0 * std::abs(overlap(a, b));
  return std::sqrt(std::max(d2, 0.0));
}

SampledPulse scaled(const SampledPulse& f, cplx factor) {
  SampledPulse out = f;
  for (auto& v : out.amps) v *= factor;
  return out;
}

SampledPulse added(const SampledPulse& a, const SampledPulse& b, cplx b_factor) {
  require_same_grid(a, b);
  SampledPulse out = a;
  for (std::size_t i = 0; i < out.amps.size(); ++i) out.amps[i] += b_factor * b.amps[i];
  return out;
}

SampledPulse normalized(const SampledPulse& f) { return with_norm_squared(f, 1.0); }

SampledPulse with_norm_squared(const SampledPulse& f, double target_norm_squared) {
  const double n2 = norm_squared(f);
  if (!(n2 > 0.0)) throw std::invalid_argument("cannot normalize a zero pulse");
  return scaled(f, std::sqrt(target_norm_squared / n2));
}

SampledPulse time_reversed_conjugate(const SampledPulse& f) {
  SampledPulse out = f;
  const std::size_t n = f.amps.size();
  for (std::size_t i = 0; i < n; ++i) out.amps[i] = std::conj(f.amps[n - 1 - i]);
  return out;
}

SampledPulse zero_extended(const SampledPulse& f, const TimeGrid& longer) {
  if (longer.size() < f.grid.size() || longer.t_start() != f.grid.t_start() ||
      std::abs(longer.dt() - f.grid.dt()) > 1e-12 * f.grid.dt()) {
    throw std::invalid_argument("zero_extended: target grid must extend the pulse grid");
  }
  SampledPulse out = SampledPulse::zeros(longer);
  std::copy(f.amps.begin(), f.amps.end(), out.amps.begin());
  return out;
}

SampledPulse windowed(const SampledPulse& f, double t0, double t1) {
  const auto [i0, i1] = index_range(f.grid, t0, t1);
  SampledPulse out = f;
  for (std::size_t i = 0; i < out.amps.size(); ++i) {
    if (i < i0 || i > i1) out.amps[i] = 0.0;
  }
  return out;
}

SampledPulse gaussian_bin(double center, double sigma, const TimeGrid& grid, bool* truncated) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian_bin: sigma must be > 0");
  if (truncated) {
    *truncated = center - 5.0 * sigma < grid.t_start() || center + 5.0 * sigma > grid.t_end();
  }
  SampledPulse out = SampledPulse::zeros(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = (grid.time(i) - center) / sigma;
    out.amps[i] = std::exp(-0.5 * u * u);
  }
  return normalized(out);
}

SampledPulse hermite_odd_bin(double center, double sigma, const TimeGrid& grid) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("hermite_odd_bin: sigma must be > 0");
  SampledPulse out = SampledPulse::zeros(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = (grid.time(i) - center) / sigma;
    out.amps[i] = u * std::exp(-0.5 * u * u);
  }
  const SampledPulse even = gaussian_bin(center, sigma, grid);
  out = added(out, even, -overlap(even, out));
  return normalized(out);
}

}  // namespace pulseqsdc::pulsekit
