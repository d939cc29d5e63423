#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pulseqsdc/time_grid.hpp"

namespace pulseqsdc {
using cplx = std::complex<double>;
}

namespace pulseqsdc::pulsekit {

/// Complex field amplitude (units 1/sqrt(time)) sampled on a uniform grid.
struct SampledPulse {
  TimeGrid grid;
  std::vector<cplx> amps;

  SampledPulse(TimeGrid g, std::vector<cplx> a);
  static SampledPulse zeros(const TimeGrid& g);

  std::size_t size() const { return amps.size(); }
  double time(std::size_t i) const { return grid.time(i); }
};

// Trapezoidal quadrature helpers on uniform spacing.
double trapezoid(std::span<const double> y, double dt);
cplx trapezoid(std::span<const cplx> y, double dt);
/// out[k] = integral of y over [t_0, t_k].
std::vector<double> cumulative_trapezoid(std::span<const double> y, double dt);

/// Integral of |f|^2 over the whole grid.
double norm_squared(const SampledPulse& f);

/// Integral of |f|^2 over [a, b], both snapped to the nearest grid points.
double norm_squared_between(const SampledPulse& f, double a, double b);

/// Integral of conj(a) * b. Throws std::invalid_argument on grid mismatch.
cplx overlap(const SampledPulse& a, const SampledPulse& b);

/// Same as overlap() restricted to [t0, t1] (snapped to grid points).
cplx overlap_between(const SampledPulse& a, const SampledPulse& b, double t0, double t1);

/// L2 distance between two pulses on the same grid.
double l2_distance(const SampledPulse& a, const SampledPulse& b);

/// L2 distance after the best global phase is applied to `b`:
/// ||a||^2 + ||b||^2 - 2 |<a, b>|.
double l2_distance_phase_aligned(const SampledPulse& a, const SampledPulse& b);

SampledPulse scaled(const SampledPulse& f, cplx factor);
SampledPulse added(const SampledPulse& a, const SampledPulse& b, cplx b_factor = 1.0);

/// Rescales to unit norm. Throws std::invalid_argument for a zero pulse.
SampledPulse normalized(const SampledPulse& f);

/// Rescales so that the integral of |f|^2 equals `target_norm_squared`.
SampledPulse with_norm_squared(const SampledPulse& f, double target_norm_squared);

/// g(t) = conj(f(t_start + t_end - t)), sample for sample on the same grid.
SampledPulse time_reversed_conjugate(const SampledPulse& f);

/// Copy of f on a longer grid sharing f's start and spacing; new samples are zero.
SampledPulse zero_extended(const SampledPulse& f, const TimeGrid& longer);

/// Keeps samples inside [t0, t1] and zeroes the rest.
SampledPulse windowed(const SampledPulse& f, double t0, double t1);

/// Unit-norm samples of exp(-(t-center)^2 / (2 sigma^2)).
/// Throws std::invalid_argument for sigma <= 0. Sets *truncated when
/// center +/- 5 sigma leaves the grid span.
SampledPulse gaussian_bin(double center, double sigma, const TimeGrid& grid, bool* truncated = nullptr);

/// Unit-norm first odd Hermite-Gaussian (t-center) exp(-(t-center)^2 / (2 sigma^2)),
/// Gram-Schmidt orthogonalized against gaussian_bin(center, sigma) on the grid.
SampledPulse hermite_odd_bin(double center, double sigma, const TimeGrid& grid);

}  // namespace pulseqsdc::pulsekit
