#include "pulseqsdc/time_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pulseqsdc::pulsekit {

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_samples)
    : t_start_(t_start), t_end_(t_end), n_samples_(n_samples) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
    throw std::invalid_argument("time grid bounds must be finite");
  }
  if (!(t_end > t_start)) {
    throw std::invalid_argument("time grid requires t_end > t_start (got " + std::to_string(t_start) +
                                ", " + std::to_string(t_end) + ")");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("time grid needs at least 2 samples");
  }
  dt_ = (t_end - t_start) / static_cast<double>(n_samples - 1);
}

std::size_t TimeGrid::index_at(double t) const {
  const double x = std::round((t - t_start_) / dt_);
  if (x <= 0.0) return 0;
  const auto i = static_cast<std::size_t>(x);
  return i >= n_samples_ ? n_samples_ - 1 : i;
}

bool TimeGrid::contains(double t) const {
  const double tol = 1e-9 * dt_;
  return t >= t_start_ - tol && t <= t_end_ + tol;
}

TimeGrid TimeGrid::extended(std::size_t extra) const {
  return TimeGrid(t_start_, t_start_ + static_cast<double>(n_samples_ - 1 + extra) * dt_, n_samples_ + extra);
}

bool TimeGrid::matches(const TimeGrid& other) const {
  if (n_samples_ != other.n_samples_ || t_start_ != other.t_start_) return false;
  const double scale = std::max(std::abs(t_end_), std::abs(t_end_ - t_start_));
  return std::abs(t_end_ - other.t_end_) <= 1e-12 * scale;
}

TimeGrid make_grid(double t_start, double t_end, std::size_t n_samples) {
  return TimeGrid(t_start, t_end, n_samples);
}

}  // namespace pulseqsdc::pulsekit
