#pragma once

#include <vector>

#include "pulseqsdc/pulse.hpp"

namespace pulseqsdc::pulsekit {

struct GaussianComponent {
  double center;
  double sigma;
  double weight;
};

/// Normalized sum of weighted unit Gaussians (real samples).
SampledPulse gaussian_mixture(const std::vector<GaussianComponent>& parts, const TimeGrid& grid);

/// Three-Gaussian target whose overlap with `reference` equals `overlap`.
/// The outer components keep weight 1; the middle weight is found by bisection.
/// Throws std::invalid_argument when `overlap` is out of reach for these shapes.
SampledPulse three_gaussian_target(const SampledPulse& reference, double overlap, const std::vector<double>& centers,
                                   const std::vector<double>& sigmas);

}  // namespace pulseqsdc::pulsekit
