#pragma once

#include <array>
#include <string>
#include <vector>

#include "pulseqsdc/dynamics.hpp"
#include "pulseqsdc/inversion.hpp"
#include "pulseqsdc/protocol.hpp"
#include "pulseqsdc/run_config.hpp"

namespace pulseqsdc::cli {

/// f_a (single Gaussian) and f_b (three Gaussians) on [0, T].
struct TargetPair {
  pulsekit::SampledPulse f_a;
  pulsekit::SampledPulse f_b;
};
pulsekit::SampledPulse build_fa(const RunConfig& cfg);
TargetPair build_targets(const RunConfig& cfg);

struct Fig2Target {
  control::InversionReport seed;   // closed-form inversion
  control::InversionReport final;  // after refinement (equal to seed when disabled)
  cavity::AmplitudeTrajectory trajectory;
};

struct Fig2Data {
  TargetPair targets;
  Fig2Target a;
  Fig2Target b;
};
Fig2Data compute_fig2(const RunConfig& cfg);

struct Fig3Data {
  TargetPair targets;
  control::ControlEnvelope omega_a;  // catch control of f_a, no ramp
  control::ControlEnvelope omega_b;
  // Input/control pairs in the order aa, bb, ba, ab (input first).
  std::array<cavity::AmplitudeTrajectory, 4> runs;
  static constexpr std::array<const char*, 4> kLabels{"aa", "bb", "ba", "ab"};

  /// |c1| after the ramp for run k.
  double amplitude(std::size_t k) const { return std::abs(runs[k].final_state().c1); }
};
Fig3Data compute_fig3(const RunConfig& cfg);

struct Fig4Pair {
  pulsekit::Symbol symbol;
  protocol::Basis rx;
  bool matched;
  protocol::ChannelProbabilities p;
  std::string label() const;  // e.g. "alpha_A"
};

struct Fig4Data {
  std::vector<Fig4Pair> pairs;  // all symbols under both receiver bases
};
Fig4Data compute_fig4(const RunConfig& cfg, const protocol::PhysicsCache& physics);

}  // namespace pulseqsdc::cli
