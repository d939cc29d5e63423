#include "pulseqsdc/targets.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pulseqsdc::pulsekit {

SampledPulse gaussian_mixture(const std::vector<GaussianComponent>& parts, const TimeGrid& grid) {
  if (parts.empty()) throw std::invalid_argument("gaussian_mixture needs at least one component");
  SampledPulse sum = SampledPulse::zeros(grid);
  for (const auto& g : parts) sum = added(sum, gaussian_bin(g.center, g.sigma, grid), g.weight);
  return normalized(sum);
}

SampledPulse three_gaussian_target(const SampledPulse& reference, double overlap, const std::vector<double>& centers,
                                   const std::vector<double>& sigmas) {
  if (centers.size() != 3 || sigmas.size() != 3) {
    throw std::invalid_argument("three_gaussian_target needs three centers and three sigmas");
  }
  const SampledPulse ref = normalized(reference);
  auto build = [&](double w) {
    return gaussian_mixture({{centers[0], sigmas[0], 1.0}, {centers[1], sigmas[1], w}, {centers[2], sigmas[2], 1.0}},
                            ref.grid);
  };
  auto gap = [&](double w) { return std::abs(pulsekit::overlap(ref, build(w))) - overlap; };

  double lo = 0.0;
  double hi = 1.0;
  while (gap(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw std::invalid_argument("overlap " + std::to_string(overlap) + " not reachable");
  }
  if (gap(lo) > 0.0) throw std::invalid_argument("overlap " + std::to_string(overlap) + " below the outer-only value");
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return build(0.5 * (lo + hi));
}

}  // namespace pulseqsdc::pulsekit
