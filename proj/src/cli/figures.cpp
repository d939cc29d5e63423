#include "pulseqsdc/figures.hpp"

#include "pulseqsdc/targets.hpp"

namespace pulseqsdc::cli {

pulsekit::SampledPulse build_fa(const RunConfig& cfg) {
  const double T = cfg.cavity.T;
  return pulsekit::gaussian_bin(cfg.fa_center_T * T, cfg.fa_sigma_T * T, cfg.grid(1.0));
}

TargetPair build_targets(const RunConfig& cfg) {
  const double T = cfg.cavity.T;
  auto f_a = build_fa(cfg);
  std::vector<double> centers;
  std::vector<double> sigmas;
  for (double c : cfg.fb_centers_T) centers.push_back(c * T);
  for (double s : cfg.fb_sigmas_T) sigmas.push_back(s * T);
  auto f_b = pulsekit::three_gaussian_target(f_a, cfg.fb_overlap, centers, sigmas);
  return {std::move(f_a), std::move(f_b)};
}

namespace {

Fig2Target shape(const pulsekit::SampledPulse& target, const RunConfig& cfg) {
  auto seed = control::invert_emission(target, cfg.cavity);
  auto final = cfg.refine_enabled ? control::refine_control(seed.control, target, cfg.cavity, cfg.refine) : seed;
  cavity::AmplitudeState s0;
  s0.c1 = 1.0;
  auto traj = cavity::evolve_emission(final.control, cfg.cavity, s0);
  return {std::move(seed), std::move(final), std::move(traj)};
}

}  // namespace

Fig2Data compute_fig2(const RunConfig& cfg) {
  TargetPair t = build_targets(cfg);
  Fig2Target a = shape(t.f_a, cfg);
  Fig2Target b = shape(t.f_b, cfg);
  return {std::move(t), std::move(a), std::move(b)};
}

Fig3Data compute_fig3(const RunConfig& cfg) {
  TargetPair t = build_targets(cfg);
  control::CatchOptions opts;
  opts.refine = cfg.refine_enabled;
  opts.refine_options = cfg.refine;
  opts.verify = false;
  auto wa = control::catch_control(t.f_a, cfg.cavity, opts).control;
  auto wb = control::catch_control(t.f_b, cfg.cavity, opts).control;
  const double ramp = cavity::default_ramp(cfg.cavity);
  auto run = [&](const pulsekit::SampledPulse& in, const control::ControlEnvelope& w) {
    return cavity::absorb_with_ramp(w, cfg.cavity, in, ramp);
  };
  std::array<cavity::AmplitudeTrajectory, 4> runs{run(t.f_a, wa), run(t.f_b, wb), run(t.f_b, wa), run(t.f_a, wb)};
  return Fig3Data{std::move(t), std::move(wa), std::move(wb), std::move(runs)};
}

std::string Fig4Pair::label() const {
  return std::string(pulsekit::to_string(symbol)) + "_" + std::string(protocol::to_string(rx));
}

Fig4Data compute_fig4(const RunConfig&, const protocol::PhysicsCache& physics) {
  Fig4Data d;
  for (protocol::Basis rx : {protocol::Basis::A, protocol::Basis::B}) {
    for (pulsekit::Symbol s : pulsekit::kAllSymbols) {
      d.pairs.push_back({s, rx, protocol::basis_of(s) == rx, physics.get(protocol::pulse_of(s), rx)});
    }
  }
  return d;
}

}  // namespace pulseqsdc::cli
