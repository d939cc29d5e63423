#include "pulseqsdc/params.hpp"

#include <cmath>
#include <stdexcept>

namespace pulseqsdc::cavity {

CavityParams CavityParams::from_ratios(double kappa_T, double g0_over_kappa, int n, double T) {
  CavityParams p;
  p.T = T;
  p.kappa = kappa_T / T;
  p.g0 = g0_over_kappa * p.kappa;
  p.n = n;
  return p;
}

void CavityParams::validate() const {
  if (!(std::isfinite(g0) && g0 > 0.0)) throw std::invalid_argument("cavity params: g0 must be > 0");
  if (!(std::isfinite(kappa) && kappa > 0.0)) throw std::invalid_argument("cavity params: kappa must be > 0");
  if (!(std::isfinite(T) && T > 0.0)) throw std::invalid_argument("cavity params: T must be > 0");
  if (n < 2) throw std::invalid_argument("cavity params: n must be >= 2");
}

std::size_t default_samples_per_T(const CavityParams& p) {
  double dt = p.T / 2000.0;
  if (p.g0 > 0.0) dt = std::min(dt, kMaxCouplingStep / p.g0);
  return static_cast<std::size_t>(std::ceil(p.T / dt - 1e-9));
}

pulsekit::TimeGrid default_grid(const CavityParams& p, double duration_in_T) {
  return grid_with_resolution(p, duration_in_T, default_samples_per_T(p));
}

pulsekit::TimeGrid grid_with_resolution(const CavityParams& p, double duration_in_T, std::size_t samples_per_T) {
  if (!(duration_in_T > 0.0)) throw std::invalid_argument("grid duration must be > 0");
  const auto intervals = static_cast<std::size_t>(std::llround(duration_in_T * static_cast<double>(samples_per_T)));
  return pulsekit::TimeGrid(0.0, duration_in_T * p.T, intervals + 1);
}

}  // namespace pulseqsdc::cavity
