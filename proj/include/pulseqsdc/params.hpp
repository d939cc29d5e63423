#pragma once

#include <cstddef>

#include "pulseqsdc/time_grid.hpp"

namespace pulseqsdc::cavity {

/// Physical constants of one atom-cavity node. Times share the unit of T.
struct CavityParams {
  double g0 = 1e4;     // atom-cavity coupling (angular frequency)
  double kappa = 100;  // cavity field decay rate
  double T = 1.0;      // time-bin duration
  int n = 3;           // protocol horizon is [0, nT]

  /// kappa = kappa_T / T, g0 = g0_over_kappa * kappa.
  static CavityParams from_ratios(double kappa_T, double g0_over_kappa, int n, double T = 1.0);

  /// Throws std::invalid_argument unless g0 > 0, kappa > 0, T > 0 and n >= 2.
  void validate() const;

  /// True when g0 < 10 kappa (outside the strong-coupling regime the model assumes).
  bool weak_coupling_advisory() const { return g0 < 10.0 * kappa; }
};

/// Largest step the integrator accepts: g0 * dt <= 0.05.
inline constexpr double kMaxCouplingStep = 0.05;

/// Samples per bin T for dt = min(0.05 / g0, T / 2000), rounded so dt divides T.
std::size_t default_samples_per_T(const CavityParams& p);

/// Grid on [0, duration_in_T * T] at the default resolution.
pulsekit::TimeGrid default_grid(const CavityParams& p, double duration_in_T);

/// Grid on [0, duration_in_T * T] with `samples_per_T` intervals per T.
pulsekit::TimeGrid grid_with_resolution(const CavityParams& p, double duration_in_T, std::size_t samples_per_T);

}  // namespace pulseqsdc::cavity
