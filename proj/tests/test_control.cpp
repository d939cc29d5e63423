#include <cmath>
#include <random>

#include "doctest.h"
#include "pulseqsdc/control_io.hpp"
#include "pulseqsdc/errors.hpp"
#include "pulseqsdc/inversion.hpp"
#include "pulseqsdc/targets.hpp"

using namespace pulseqsdc;
using namespace pulseqsdc::control;
using cavity::CavityParams;
using pulsekit::SampledPulse;
using pulsekit::TimeGrid;

namespace {

CavityParams fig_params() { return CavityParams::from_ratios(100.0, 100.0, 3); }

cavity::AmplitudeState atom_excited() {
  cavity::AmplitudeState s;
  s.c1 = 1.0;
  return s;
}

struct Targets {
  CavityParams p = fig_params();
  TimeGrid grid = cavity::default_grid(p, 1.0);
  SampledPulse fa = pulsekit::gaussian_bin(0.5, 0.1, grid);
  SampledPulse fb = pulsekit::three_gaussian_target(fa, M_SQRT1_2, {0.3, 0.5, 0.7}, {0.05, 0.04, 0.05});
};

// Smooth random pulse: two to three Gaussians with random weights and signs, inside [0.15, 0.85].
SampledPulse random_smooth(std::mt19937_64& rng, const TimeGrid& g) {
  std::uniform_real_distribution<double> center(0.3, 0.7);
  std::uniform_real_distribution<double> width(0.06, 0.1);
  std::uniform_real_distribution<double> weight(0.3, 1.0);
  std::vector<pulsekit::GaussianComponent> parts;
  const int k = 2 + static_cast<int>(rng() % 2);
  for (int i = 0; i < k; ++i) parts.push_back({center(rng), width(rng), weight(rng)});
  return pulsekit::gaussian_mixture(parts, g);
}

}  // namespace

TEST_CASE("constant mixing angle target inverts to Omega = g0") {
  // |f|^2 = (kappa/2) exp(-kappa t / 2) leaves P(t) = exp(-kappa t / 2), so cos^2 = 1/2.
  const auto p = fig_params();
  const TimeGrid g(0.0, 0.1, 20001);
  SampledPulse f = SampledPulse::zeros(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.amps[i] = std::sqrt(p.kappa / 2 * std::exp(-p.kappa * g.time(i) / 2));
  double clamp = -1.0;
  const auto c = analytic_control(f, p, {}, &clamp);
  CHECK(clamp == 0.0);
  for (std::size_t i = 0; i < g.size(); i += 500) CHECK(c.omega[i] == doctest::Approx(p.g0).epsilon(1e-4));
}

TEST_CASE("zero target gives zero drive and no photon") {
  const auto p = fig_params();
  const auto g = cavity::default_grid(p, 1.0);
  const auto r = invert_emission(SampledPulse::zeros(g), p);
  for (double w : r.control.omega) CHECK(w == 0.0);
  CHECK(r.score.emitted_norm == 0.0);
  CHECK(r.score.zero_output);
  CHECK(r.score.fidelity == 0.0);
}

TEST_CASE("inversion errors") {
  const auto p = fig_params();
  const auto g = cavity::default_grid(p, 1.0);
  CHECK_THROWS_AS(analytic_control(pulsekit::scaled(pulsekit::gaussian_bin(0.5, 0.1, g), 1.1), p),
                  std::invalid_argument);
  // Far narrower than 1/kappa: the cavity cannot emit this fast.
  try {
    analytic_control(pulsekit::with_norm_squared(pulsekit::gaussian_bin(0.5, 0.001, g), 0.9), p);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}

TEST_CASE_FIXTURE(Targets, "Gaussian target inversion") {
  const auto r = invert_emission(fa, p);
  CHECK(r.infidelity < 1e-2);
  CHECK(r.infidelity >= 0.0);
  CHECK(r.clamp_fraction >= 0.0);
  CHECK(r.clamp_fraction <= 1.0);
  CHECK(r.score.l2_error_aligned < 1e-1);
  // Drive rises through the pulse and stays of order g0 (Fig. 2(b) shape).
  const double peak = r.control.max_abs() / p.g0;
  CHECK(peak > 0.1);
  CHECK(peak < 10.0);
  CHECK(std::abs(r.control.omega[grid.index_at(0.3)]) < std::abs(r.control.omega[grid.index_at(0.7)]));
}

TEST_CASE_FIXTURE(Targets, "inversion consistency with the dark-state model") {
  const SampledPulse reserved = pulsekit::with_norm_squared(fa, 1.0 - kTargetReserve);
  double clamp = -1.0;
  const auto c = analytic_control(reserved, p, {}, &clamp);
  const auto dark = cavity::dark_state_emission(c, p);
  double peak = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    peak = std::max(peak, std::abs(reserved.amps[i]));
    worst = std::max(worst, std::abs(std::abs(dark.out_pulse.amps[i]) - std::abs(reserved.amps[i])));
  }
  CHECK(worst < 1e-2 * peak);
  if (clamp == 0.0) CHECK(pulsekit::l2_distance_phase_aligned(reserved, dark.out_pulse) < 1e-4);
}

TEST_CASE_FIXTURE(Targets, "refinement never loses and honors a zero budget") {
  const auto seed = invert_emission(fa, p);
  RefineOptions quick;
  quick.max_evaluations = 40;
  const auto refined = refine_control(seed.control, fa, p, quick);
  CHECK(refined.infidelity <= seed.infidelity + 1e-15);
  CHECK(refined.evaluations <= quick.max_evaluations);

  RefineOptions none;
  none.max_evaluations = 0;
  const auto same = refine_control(seed.control, fa, p, none);
  CHECK(same.control.omega == seed.control.omega);
  CHECK_FALSE(same.improved);
  CHECK_FALSE(same.note.empty());
}

TEST_CASE_FIXTURE(Targets, "three-Gaussian target reproduced after refinement") {
  const auto seed = invert_emission(fb, p);
  RefineOptions quick;
  quick.max_evaluations = 60;
  const auto r = refine_control(seed.control, fb, p, quick);
  CHECK(r.score.l2_error_aligned < 2e-2);
  CHECK(r.score.fidelity >= 0.99);
}

TEST_CASE_FIXTURE(Targets, "emission fidelity scoring") {
  const auto zero = emission_fidelity(ControlEnvelope::constant(grid, 0.0), fa, p);
  CHECK(zero.fidelity == 0.0);
  CHECK(zero.emitted_norm == 0.0);
  const auto cross = emission_fidelity(invert_emission(fa, p).control, fb, p);
  CHECK(std::abs(cross.fidelity - std::norm(pulsekit::overlap(fa, fb))) < 0.01);
  CHECK_THROWS_AS(emission_fidelity(ControlEnvelope::constant(grid, 0.0), SampledPulse::zeros(TimeGrid(0, 1, 11)), p),
                  std::invalid_argument);
}

TEST_CASE_FIXTURE(Targets, "catch controls") {
  const auto a = catch_control(fa, p);
  CHECK(a.verified_absorption >= 0.98);
  const auto b = catch_control(fb, p);
  const auto cross = cavity::absorb_with_ramp(b.control, p, fa, cavity::default_ramp(p));
  CHECK(std::abs(std::sqrt(cross.terminal_absorption()) - M_SQRT1_2) < 0.02);

  // f_a is symmetric about T/2, so its catch drive is its emission drive reversed.
  const auto emit = invert_emission(fa, p).control;
  const auto rev = reversed(emit);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(rev.omega[i] - a.control.omega[i]));
  CHECK(worst < 1e-6 * p.g0);

  // Overall sign follows the input: a flipped pulse is still caught with c_D = +1.
  const auto flipped = pulsekit::scaled(fa, -1.0);
  const auto cd = cavity::dark_state_absorption(catch_control(flipped, p).control, p, flipped);
  CHECK(std::abs(cd.back() - 1.0) < 0.02);

  CatchOptions skip;
  skip.verify = false;
  CHECK(catch_control(fa, p, skip).verified_absorption == -1.0);
  CHECK_THROWS_AS(catch_control(SampledPulse::zeros(grid), p), std::invalid_argument);
}

TEST_CASE("round trip for random smooth targets") {
  const auto p = fig_params();
  const auto g = cavity::default_grid(p, 1.0);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 4; ++k) {
    const auto f = random_smooth(rng, g);
    const auto emitted = cavity::evolve_emission(invert_emission(f, p).control, p, atom_excited()).out_pulse;
    const auto c = catch_control(emitted, p, {}).control;
    const auto back = cavity::absorb_with_ramp(c, p, emitted, cavity::default_ramp(p));
    CHECK(back.terminal_absorption() >= 0.98);
  }
}

TEST_CASE("control envelope helpers") {
  const TimeGrid g(0.0, 1.0, 101);
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sin(3.0 * g.time(i)) + 0.1 * static_cast<double>(i);
  const ControlEnvelope c(g, w);
  CHECK(reversed(reversed(c)).omega == c.omega);
  CHECK(reversed(c).omega.front() == c.omega.back());
  const auto ramped = with_ramp_down(c, 0.05);
  CHECK(ramped.size() == c.size() + 5);
  CHECK(ramped.omega.back() == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t i = c.size(); i < ramped.size(); ++i) CHECK(std::abs(ramped.omega[i]) <= std::abs(c.omega.back()));
  CHECK_THROWS_AS(ControlEnvelope(g, std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("monotone cubic interpolation") {
  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> ys{0.0, 0.1, 2.0, 2.05, 5.0};
  double prev = -1.0;
  for (double x = 0.0; x <= 4.0; x += 0.01) {
    const double y = pchip(xs, ys, x);
    CHECK(y >= prev - 1e-15);
    prev = y;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(pchip(xs, ys, xs[i]) == doctest::Approx(ys[i]));
  // Linear data is reproduced exactly.
  const std::vector<double> lin{1.0, 3.0, 5.0, 7.0, 9.0};
  CHECK(pchip(xs, lin, 2.7) == doctest::Approx(6.4));
}

TEST_CASE("control CSV round trip") {
  const auto p = fig_params();
  const TimeGrid g(0.0, 1.0, 11);
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = p.g0 * (0.1 * static_cast<double>(i) - 0.3);
  const ControlEnvelope c(g, w);
  const auto rec = ControlParamsRecord::from(p, c.size());
  const std::string json = params_record_to_json(rec);
  const auto rec2 = params_record_from_json(json);
  CHECK(rec2.g0_kappa_ratio == 100.0);
  CHECK(rec2.kappa_T == 100.0);
  CHECK(rec2.n == 3);
  CHECK(rec2.grid_samples == 11);
  const std::string csv = control_to_csv(c, p);
  CHECK(csv.rfind("t,omega_over_g0\n", 0) == 0);
  const auto back = control_from_csv(csv, rec2);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(back.omega[i] == doctest::Approx(w[i]).epsilon(1e-15));
  auto wrong = rec2;
  wrong.grid_samples = 12;
  CHECK_THROWS_AS(control_from_csv(csv, wrong), std::invalid_argument);
  CHECK_THROWS_AS(params_record_from_json("{\"kappa_T\": 1}"), std::invalid_argument);
}
