#pragma once

#include <vector>

#include "pulseqsdc/time_grid.hpp"

namespace pulseqsdc::control {

/// Classical Rabi drive Omega(t) sampled on a grid (angular frequency units).
///
/// Samples are real; a negative value is the same drive with phase pi. The
/// magnitude is bounded by the inversion cap (10 g0 by default).
struct ControlEnvelope {
  pulsekit::TimeGrid grid;
  std::vector<double> omega;

  ControlEnvelope(pulsekit::TimeGrid g, std::vector<double> w);
  static ControlEnvelope constant(const pulsekit::TimeGrid& g, double value);

  std::size_t size() const { return omega.size(); }
  double max_abs() const;
};

/// Omega(t_start + t_end - t), sample for sample. Applying it twice is the identity.
ControlEnvelope reversed(const ControlEnvelope& c);

/// Appends `duration` (rounded to whole steps) during which Omega falls smoothly
/// (cos^2 profile) from its last value to zero.
ControlEnvelope with_ramp_down(const ControlEnvelope& c, double duration);

}  // namespace pulseqsdc::control
