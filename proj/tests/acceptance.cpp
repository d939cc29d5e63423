// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pulseqsdc/commands.hpp"
#include "pulseqsdc/figures.hpp"
#include "pulseqsdc/targets.hpp"
#include "pulseqsdc/text_io.hpp"

using namespace pulseqsdc;
using pulsekit::SampledPulse;
using pulsekit::Symbol;

namespace {

// Tolerances.
constexpr double kEmitFidelity = 0.99;
constexpr double kEmitNorm = 0.99;
constexpr double kTargetSeconds = 60.0;
constexpr double kAmplitudeTol = 0.02;
constexpr double kProbTol = 0.02;
constexpr double kKernelTol = 0.05;
constexpr double kOverlapTol = 0.02;
constexpr int kOverlapPairs = 20;
constexpr double kFluxTol = 1e-4;
constexpr double kRoundTrip = 0.98;
constexpr double kRateTolR = 0.015;
constexpr double kRateTolNR = 0.013;
constexpr int kPooledSessions = 10;
constexpr int kEveSessions = 100;
constexpr double kDetection = 0.99;
constexpr double kProtocolSeconds = 300.0;

int failures = 0;
double worst_flux = 0.0;
std::size_t flux_runs = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d %-24s %s  %s\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every simulated trajectory is fed through here for the conservation criterion.
void track(const cavity::AmplitudeTrajectory& t) {
  worst_flux = std::max(worst_flux, std::abs(cavity::flux_balance(t).back()));
  ++flux_runs;
}

void track(const cavity::AmplitudeTrajectory& t, const SampledPulse& input) {
  worst_flux = std::max(worst_flux, std::abs(cavity::flux_balance(t, pulsekit::zero_extended(input, t.grid)).back()));
  ++flux_runs;
}

cavity::AmplitudeState atom_excited() {
  cavity::AmplitudeState s;
  s.c1 = 1.0;
  return s;
}

cli::RunConfig default_config() { return cli::load_run_config(PULSEQSDC_DEFAULT_CONFIG); }

void criterion_1(const cli::RunConfig& cfg) {
  const auto targets = cli::build_targets(cfg);
  bool pass = true;
  std::string detail;
  for (const auto& [name, target] : {std::pair{"f_a", &targets.f_a}, std::pair{"f_b", &targets.f_b}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto seed = control::invert_emission(*target, cfg.cavity);
    const auto best = control::refine_control(seed.control, *target, cfg.cavity, cfg.refine);
    const double secs = seconds_since(t0);
    track(cavity::evolve_emission(best.control, cfg.cavity, atom_excited()));
    const bool ok = best.score.fidelity >= kEmitFidelity && best.score.emitted_norm >= kEmitNorm && secs <= kTargetSeconds;
    pass = pass && ok;
    detail += std::string(name) + ": fidelity " + fmt("%.6f", best.score.fidelity) + " norm " +
              fmt("%.4f", best.score.emitted_norm) + " time " + fmt("%.1fs", secs) + "; ";
  }
  report(1, "emission shaping", pass, detail);
}

void criterion_2(const cli::RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = cli::compute_fig3(cfg);
  const double secs = seconds_since(t0);
  const double expected[4] = {1.0, 1.0, M_SQRT1_2, M_SQRT1_2};
  bool pass = secs <= kTargetSeconds;
  std::string detail;
  for (std::size_t k = 0; k < 4; ++k) {
    const double a = d.amplitude(k);
    pass = pass && std::abs(a - expected[k]) <= kAmplitudeTol;
    detail += std::string("c_") + cli::Fig3Data::kLabels[k] + " " + fmt("%.4f", a) + " ";
    track(d.runs[k], k == 0 || k == 3 ? d.targets.f_a : d.targets.f_b);
  }
  report(2, "absorption amplitudes", pass, detail + "time " + fmt("%.1fs", secs));
}

void criterion_3(const cli::RunConfig& cfg, const protocol::PhysicsCache& ph) {
  bool pass = true;
  double worst_mid = 0.0;
  for (const auto& pair : cli::compute_fig4(cfg, ph).pairs) {
    const double err = std::abs(pair.p.p1_mid - (pair.matched ? 0.5 : 0.25));
    worst_mid = std::max(worst_mid, err);
    pass = pass && err <= kProbTol;
  }
  using protocol::Basis;
  using protocol::PulseId;
  const double aa = ph.get(PulseId::alpha, Basis::A).p1_final;
  const double bb = ph.get(PulseId::beta, Basis::B).p1_final;
  const double ga = ph.get(PulseId::gamma, Basis::A).p1_final;
  const double mb = ph.get(PulseId::mu, Basis::B).p1_final;
  pass = pass && std::abs(aa - 1.0) <= kProbTol && std::abs(bb - 1.0) <= kProbTol && ga <= kProbTol && mb <= kProbTol;
  for (auto id : protocol::kAllPulses) {
    for (Basis b : {Basis::A, Basis::B}) track(ph.trajectory(id, b), ph.pulse(id));
  }
  report(3, "receiver statistics", pass,
         "worst mid deviation " + fmt("%.4f", worst_mid) + "; final aa " + fmt("%.4f", aa) + " bb " + fmt("%.4f", bb) +
             " ga " + fmt("%.2e", ga) + " mb " + fmt("%.2e", mb));
}

// max_t |J(t_end, t) - input*(t)/sqrt(x)| relative to max|f|, x = int |input|^2.
double kernel_mismatch(const SampledPulse& input, const SampledPulse& unit, const cavity::CavityParams& p) {
  control::CatchOptions opts;
  opts.verify = false;
  const auto c = control::catch_control(input, p, opts).control;
  const auto J = cavity::kernel_J_terminal(c, p);
  const double root_x = std::sqrt(pulsekit::norm_squared(input));
  double peak = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < J.size(); ++i) {
    peak = std::max(peak, std::abs(unit.amps[i]));
    worst = std::max(worst, std::abs(J[i] - std::conj(input.amps[i]) / root_x));
  }
  return worst / peak;
}

void criterion_4(const protocol::PhysicsCache& ph) {
  double worst = 0.0;
  for (Symbol s : pulsekit::kAllSymbols) {
    const auto& f = ph.alphabet().get(s);
    for (double x : {1.0, 0.25, 4.0}) {
      worst = std::max(worst, kernel_mismatch(pulsekit::scaled(f, std::sqrt(x)), f, ph.params()));
    }
  }
  report(4, "kernel matching", worst < kKernelTol, "worst max|J - a_in*/sqrt(x)| / max|f| " + fmt("%.4f", worst));
}

SampledPulse random_pulse(std::mt19937_64& rng, const pulsekit::TimeGrid& g) {
  std::uniform_real_distribution<double> center(0.3, 0.7);
  std::uniform_real_distribution<double> width(0.06, 0.1);
  std::uniform_real_distribution<double> weight(0.3, 1.0);
  std::vector<pulsekit::GaussianComponent> parts;
  const int k = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < k; ++i) {
    const double sign = (rng() & 1) ? 1.0 : -1.0;
    parts.push_back({center(rng), width(rng), sign * weight(rng)});
  }
  return pulsekit::gaussian_mixture(parts, g);
}

void criterion_5(const cavity::CavityParams& p) {
  const auto grid = cavity::default_grid(p, 1.0);
  std::mt19937_64 rng(2024);
  double worst_full = 0.0;
  double worst_dark = 0.0;
  int done = 0;
  while (done < kOverlapPairs) {
    const SampledPulse fa = random_pulse(rng, grid);
    const SampledPulse fb = random_pulse(rng, grid);
    control::CatchOptions opts;
    opts.verify = false;
    const auto c = control::catch_control(fa, p, opts).control;
    const cplx o = pulsekit::overlap(fa, fb);
    const auto traj = cavity::evolve_absorption(c, p, fb);
    track(traj, fb);
    // The bare-basis projection carries the opposite sign to the dark-state model.
    const cplx c_full = -cavity::project_dark_basis(traj, c, p).c_dark.back();
    const cplx c_dark = cavity::dark_state_absorption(c, p, fb).back();
    worst_full = std::max(worst_full, std::abs(c_full - o));
    worst_dark = std::max(worst_dark, std::abs(c_dark - o));
    ++done;
  }
  report(5, "overlap rule", worst_full < kOverlapTol && worst_dark < kOverlapTol,
         std::to_string(kOverlapPairs) + " pairs; worst |c_D - O_ba| full " + fmt("%.4f", worst_full) + " dark " +
             fmt("%.4f", worst_dark));
}

void criterion_7(const protocol::PhysicsCache& ph) {
  const auto& p = ph.params();
  double worst = 1.0;
  std::string detail;
  for (Symbol s : pulsekit::kAllSymbols) {
    const auto& f = ph.alphabet().get(s);
    const auto emitted = cavity::evolve_emission(control::invert_emission(f, p).control, p, atom_excited());
    track(emitted);
    control::CatchOptions opts;
    opts.verify = false;
    const auto c = control::catch_control(f, p, opts).control;
    const auto caught = cavity::absorb_with_ramp(c, p, emitted.out_pulse, cavity::default_ramp(p));
    track(caught, emitted.out_pulse);
    worst = std::min(worst, caught.terminal_absorption());
    detail += std::string(pulsekit::to_string(s)) + " " + fmt("%.4f", caught.terminal_absorption()) + " ";
  }
  report(7, "round trip", worst >= kRoundTrip, detail);
}

void criterion_8(const cli::RunConfig& cfg, const protocol::PhysicsCache& ph) {
  const auto t0 = std::chrono::steady_clock::now();
  auto honest = cfg.protocol;
  honest.eve = {};
  honest.seed = 42;
  const auto single = protocol::run_session(honest, ph);
  const bool single_ok = single.check.verdict == protocol::Verdict::pass;

  std::size_t r_n = 0, r_1 = 0, nr_n = 0, nr_1 = 0;
  for (int k = 0; k < kPooledSessions; ++k) {
    honest.seed = 1000 + static_cast<std::uint64_t>(k);
    const auto r = protocol::run_session(honest, ph);
    r_n += r.check.r_count;
    r_1 += r.check.r_ones;
    nr_n += r.check.nr_count;
    nr_1 += r.check.nr_ones;
  }
  const double r_rate = static_cast<double>(r_1) / static_cast<double>(r_n);
  const double nr_rate = static_cast<double>(nr_1) / static_cast<double>(nr_n);
  const bool bands_ok = std::abs(r_rate - 0.5) <= kRateTolR && std::abs(nr_rate - 0.25) <= kRateTolNR;

  auto tapped = cfg.protocol;
  tapped.eve = {protocol::EveKind::intercept_resend_full, 1.0};
  int caught = 0;
  for (int k = 0; k < kEveSessions; ++k) {
    tapped.seed = 5000 + static_cast<std::uint64_t>(k);
    caught += protocol::run_session(tapped, ph).check.verdict == protocol::Verdict::abort;
  }
  const double detect = static_cast<double>(caught) / kEveSessions;
  const double secs = seconds_since(t0);
  report(8, "protocol statistics", single_ok && bands_ok && detect >= kDetection && secs <= kProtocolSeconds,
         "seed 42: r " + fmt("%.4f", single.check.r_rate()) + " (z " + fmt("%.2f", single.check.z_r) + ") nr " +
             fmt("%.4f", single.check.nr_rate()) + " (z " + fmt("%.2f", single.check.z_nr) + "); pooled r " +
             fmt("%.4f", r_rate) + " nr " + fmt("%.4f", nr_rate) + "; eve detected " + fmt("%.2f", detect) + "; time " +
             fmt("%.1fs", secs));
}

void criterion_9() {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "pulseqsdc_acceptance";
  fs::remove_all(base);
  std::string transcripts[2];
  bool codes_ok = true;
  for (int k = 0; k < 2; ++k) {
    const fs::path dir = base / std::to_string(k);
    fs::create_directories(dir);
    const std::string out = dir.string();
    const char* argv[] = {"pulseqsdc", "protocol", "--seed", "42", "--out", out.c_str()};
    std::ostringstream sink;
    codes_ok = codes_ok && cli::run(6, argv, sink, sink) == cli::kExitOk;
    transcripts[k] = io::read_file(dir / "transcript.csv");
  }
  fs::remove_all(base);
  const bool same = transcripts[0] == transcripts[1] && !transcripts[0].empty();
  report(9, "determinism", codes_ok && same,
         std::string(same ? "identical" : "different") + " transcripts (" + std::to_string(transcripts[0].size()) +
             " bytes)");
}

}  // namespace

int main() {
  try {
    const cli::RunConfig cfg = default_config();
    criterion_1(cfg);
    criterion_2(cfg);
    const auto alphabet = pulsekit::build_alphabet(cfg.cavity, cfg.bin_sigma_T * cfg.cavity.T, cfg.grid(cfg.cavity.n));
    const protocol::PhysicsCache physics(cfg.cavity, alphabet);
    criterion_3(cfg, physics);
    criterion_4(physics);
    criterion_5(cfg.cavity);
    criterion_7(physics);
    report(6, "flux conservation", worst_flux <= kFluxTol,
           std::to_string(flux_runs) + " trajectories; worst |residual| " + fmt("%.2e", worst_flux));
    criterion_8(cfg, physics);
    criterion_9();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
