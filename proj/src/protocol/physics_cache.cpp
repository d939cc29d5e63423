#include <stdexcept>

#include "pulseqsdc/inversion.hpp"
#include "pulseqsdc/protocol.hpp"

namespace pulseqsdc::protocol {

namespace {

using control::ControlEnvelope;
using pulsekit::SampledPulse;
using pulsekit::TimeGrid;

std::size_t basis_index(Basis b) { return b == Basis::A ? 0 : 1; }

SampledPulse first_bin_mode(const SampledPulse& f, double T) { return pulsekit::normalized(pulsekit::windowed(f, 0.0, T)); }

// Leading part of a grid up to (and including) the sample nearest t_end.
TimeGrid head_grid(const TimeGrid& g, double t_end) {
  const std::size_t k = g.index_at(t_end);
  return TimeGrid(g.t_start(), g.time(k), k + 1);
}

SampledPulse head(const SampledPulse& f, const TimeGrid& g) {
  return SampledPulse{g, std::vector<cplx>(f.amps.begin(), f.amps.begin() + static_cast<std::ptrdiff_t>(g.size()))};
}

ControlEnvelope head(const ControlEnvelope& c, const TimeGrid& g) {
  return ControlEnvelope(g, std::vector<double>(c.omega.begin(), c.omega.begin() + static_cast<std::ptrdiff_t>(g.size())));
}

}  // namespace

PhysicsCache::PhysicsCache(const CavityParams& params, const PulseAlphabet& alphabet)
    : params_(params), alphabet_(alphabet), ramp_(cavity::default_ramp(params)), mid_time_(params.T + ramp_) {
  params_.validate();
  const auto& grid = alphabet_.grid();
  pulses_ = {alphabet_.alpha,
             alphabet_.beta,
             alphabet_.gamma,
             alphabet_.mu,
             first_bin_mode(alphabet_.alpha, params_.T),
             first_bin_mode(alphabet_.beta, params_.T),
             SampledPulse::zeros(grid)};

  control::CatchOptions opts;
  opts.verify = false;
  for (Symbol s : {Symbol::alpha, Symbol::beta}) {
    ControlEnvelope c = control::catch_control(alphabet_.get(s), params_, opts).control;
    ramped_.push_back(control::with_ramp_down(c, ramp_));
    controls_.push_back(std::move(c));
  }

  const TimeGrid mid_grid = head_grid(grid, params_.T);
  for (std::size_t p = 0; p < kAllPulses.size(); ++p) {
    for (Basis b : {Basis::A, Basis::B}) {
      const ControlEnvelope& c = controls_[basis_index(b)];
      const double mid =
          cavity::absorb_with_ramp(head(c, mid_grid), params_, head(pulses_[p], mid_grid), ramp_).terminal_absorption();
      const double fin = cavity::absorb_with_ramp(c, params_, pulses_[p], ramp_).terminal_absorption();
      table_[p][basis_index(b)] = {mid, fin};
    }
  }
}

ChannelProbabilities PhysicsCache::get(PulseId pulse, Basis rx) const {
  return table_[static_cast<std::size_t>(pulse)][basis_index(rx)];
}

const pulsekit::SampledPulse& PhysicsCache::pulse(PulseId id) const { return pulses_[static_cast<std::size_t>(id)]; }

const control::ControlEnvelope& PhysicsCache::catch_control(Basis rx) const { return ramped_[basis_index(rx)]; }

cavity::AmplitudeTrajectory PhysicsCache::trajectory(PulseId pulse, Basis rx) const {
  return cavity::absorb_with_ramp(controls_[basis_index(rx)], params_, this->pulse(pulse), ramp_);
}

}  // namespace pulseqsdc::protocol
