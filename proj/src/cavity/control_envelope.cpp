#include "pulseqsdc/control_envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulseqsdc::control {

ControlEnvelope::ControlEnvelope(pulsekit::TimeGrid g, std::vector<double> w) : grid(g), omega(std::move(w)) {
  if (omega.size() != grid.size()) throw std::invalid_argument("control sample count does not match its grid");
  for (double v : omega) {
    if (!std::isfinite(v)) throw std::invalid_argument("control contains non-finite samples");
  }
}

ControlEnvelope ControlEnvelope::constant(const pulsekit::TimeGrid& g, double value) {
  return ControlEnvelope(g, std::vector<double>(g.size(), value));
}

double ControlEnvelope::max_abs() const {
  double m = 0.0;
  for (double v : omega) m = std::max(m, std::abs(v));
  return m;
}

ControlEnvelope reversed(const ControlEnvelope& c) {
  ControlEnvelope out = c;
  std::reverse(out.omega.begin(), out.omega.end());
  return out;
}

ControlEnvelope with_ramp_down(const ControlEnvelope& c, double duration) {
  if (!(duration >= 0.0)) throw std::invalid_argument("ramp duration must be >= 0");
  const auto extra = static_cast<std::size_t>(std::llround(duration / c.grid.dt()));
  if (extra == 0) return c;
  std::vector<double> w = c.omega;
  const double last = w.back();
  w.reserve(w.size() + extra);
  for (std::size_t k = 1; k <= extra; ++k) {
    const double s = std::cos(0.5 * M_PI * static_cast<double>(k) / static_cast<double>(extra));
    w.push_back(last * s * s);
  }
  return ControlEnvelope(c.grid.extended(extra), std::move(w));
}

}  // namespace pulseqsdc::control
