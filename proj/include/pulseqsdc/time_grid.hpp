#pragma once

#include <cstddef>

namespace pulseqsdc::pulsekit {

/// Uniform sampling of [t_start, t_end] with n_samples points, endpoints included.
class TimeGrid {
 public:
  /// Throws std::invalid_argument on non-finite bounds, t_end <= t_start or n_samples < 2.
  TimeGrid(double t_start, double t_end, std::size_t n_samples);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  std::size_t size() const { return n_samples_; }
  double dt() const { return dt_; }
  double span() const { return t_end_ - t_start_; }

  double time(std::size_t i) const { return t_start_ + static_cast<double>(i) * dt_; }

  /// Index of the grid point nearest to t, clamped to the grid.
  std::size_t index_at(double t) const;

  bool contains(double t) const;

  /// Same start and spacing with `extra` more points appended at the end.
  TimeGrid extended(std::size_t extra) const;

  /// Identical sampling up to floating round-off in t_end.
  bool matches(const TimeGrid& other) const;

 private:
  double t_start_;
  double t_end_;
  std::size_t n_samples_;
  double dt_;
};

TimeGrid make_grid(double t_start, double t_end, std::size_t n_samples);

}  // namespace pulseqsdc::pulsekit
