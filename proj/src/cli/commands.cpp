#include "pulseqsdc/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <string>

#include "json.hpp"
#include "pulseqsdc/alphabet.hpp"
#include "pulseqsdc/control_io.hpp"
#include "pulseqsdc/errors.hpp"
#include "pulseqsdc/figures.hpp"
#include "pulseqsdc/pulse_csv.hpp"
#include "pulseqsdc/run_config.hpp"
#include "pulseqsdc/text_io.hpp"
#include "pulseqsdc/trajectory_csv.hpp"

namespace pulseqsdc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using pulsekit::SampledPulse;

struct Globals {
  std::string config_path = PULSEQSDC_DEFAULT_CONFIG;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> stride;
};

class Writer {
 public:
  Writer(fs::path dir, std::ostream& log) : dir_(std::move(dir)), log_(log) {
    if (!fs::is_directory(dir_)) throw std::invalid_argument("output directory does not exist: " + dir_.string());
  }

  void put(const std::string& name, std::string_view content) {
    io::write_file_atomic(dir_ / name, content);
    log_ << "wrote " << (dir_ / name).string() << "\n";
  }

  void json(const std::string& name, const ordered_json& j) { put(name, j.dump(2) + "\n"); }

 private:
  fs::path dir_;
  std::ostream& log_;
};

RunConfig load(const Globals& g) {
  RunConfig cfg = load_run_config(g.config_path);
  if (g.seed) cfg.set_seed(*g.seed);
  if (g.out) cfg.out_dir = *g.out;
  if (g.stride) {
    if (*g.stride == 0) throw std::invalid_argument("--stride must be >= 1");
    cfg.stride = *g.stride;
  }
  return cfg;
}

// Named pulses come from the config; anything else is read as a pulse CSV.
SampledPulse resolve_pulse(const std::string& name, const RunConfig& cfg) {
  if (name == "f_a") return build_fa(cfg);
  if (name == "f_b") return build_targets(cfg).f_b;
  for (pulsekit::Symbol s : pulsekit::kAllSymbols) {
    if (name == pulsekit::to_string(s)) return pulsekit::build_alphabet(cfg.cavity, cfg.bin_sigma_T * cfg.cavity.T, cfg.grid(cfg.cavity.n)).get(s);
  }
  return pulsekit::pulse_from_csv(io::read_file(name));
}

control::ControlEnvelope read_control(const std::string& csv_path, const std::string& params_path,
                                      cavity::CavityParams* params) {
  const auto record = control::params_record_from_json(io::read_file(params_path));
  *params = record.params();
  return control::control_from_csv(io::read_file(csv_path), record);
}

void write_control(Writer& w, const std::string& name, const control::ControlEnvelope& c,
                   const cavity::CavityParams& p) {
  w.put(name + ".csv", control::control_to_csv(c, p));
  w.put(name + "_params.json", control::params_record_to_json(control::ControlParamsRecord::from(p, c.size())));
}

ordered_json score_json(const control::EmissionScore& s) {
  return {{"fidelity", s.fidelity},
          {"l2_error", s.l2_error},
          {"l2_error_aligned", s.l2_error_aligned},
          {"emitted_norm", s.emitted_norm},
          {"residual_population", s.residual_population}};
}

ordered_json report_json(const control::InversionReport& r, const cavity::CavityParams& p) {
  return {{"infidelity", r.infidelity},
          {"clamp_fraction", r.clamp_fraction},
          {"residual_population", r.residual_population},
          {"max_omega_over_g0", r.control.max_abs() / p.g0},
          {"refined", r.improved},
          {"evaluations", r.evaluations},
          {"note", r.note},
          {"score", score_json(r.score)}};
}

// Column-wise CSV of several real series sharing a time axis, every `stride`-th row plus the last.
std::string columns_csv(const pulsekit::TimeGrid& grid, const std::vector<std::string>& names,
                        const std::vector<std::vector<double>>& cols, std::size_t stride) {
  std::string out = "t";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  auto row = [&](std::size_t k) {
    out += io::format_double(grid.time(k));
    for (const auto& c : cols) out += "," + io::format_double(c[k]);
    out += "\n";
  };
  std::size_t k = 0;
  for (; k < grid.size(); k += stride) row(k);
  if (k - stride != grid.size() - 1) row(grid.size() - 1);
  return out;
}

std::vector<double> re(const SampledPulse& f) {
  std::vector<double> v;
  for (const auto& a : f.amps) v.push_back(a.real());
  return v;
}

std::vector<double> im(const SampledPulse& f) {
  std::vector<double> v;
  for (const auto& a : f.amps) v.push_back(a.imag());
  return v;
}

std::vector<double> over_g0(const control::ControlEnvelope& c, double g0) {
  std::vector<double> v;
  for (double w : c.omega) v.push_back(w / g0);
  return v;
}

double flux_end(const cavity::AmplitudeTrajectory& t) { return cavity::flux_balance(t).back(); }

// Commands ---------------------------------------------------------------------------------------

int cmd_alphabet(const RunConfig& cfg, std::ostream& out) {
  Writer w(cfg.out_dir, out);
  const auto a = pulsekit::build_alphabet(cfg.cavity, cfg.bin_sigma_T * cfg.cavity.T, cfg.grid(cfg.cavity.n));
  for (pulsekit::Symbol s : pulsekit::kAllSymbols) {
    w.put("f_" + std::string(pulsekit::to_string(s)) + ".csv", pulsekit::pulse_to_csv(a.get(s)));
  }
  const auto report = pulsekit::validate_alphabet(a);
  ordered_json checks = ordered_json::array();
  for (const auto& r : report.results) {
    checks.push_back({{"name", r.name},
                      {"value", r.value},
                      {"expected", r.expected},
                      {"residual", r.residual},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass}});
  }
  w.json("alphabet_report.json", {{"all_pass", report.all_pass()}, {"constraints", checks}});
  if (!report.all_pass()) {
    for (const auto& r : report.results) {
      if (!r.pass) out << "constraint failed: " << r.name << " (residual " << r.residual << ")\n";
    }
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_invert(const RunConfig& cfg, const std::string& target_name, std::ostream& out) {
  Writer w(cfg.out_dir, out);
  const SampledPulse target = resolve_pulse(target_name, cfg);
  const auto seed = control::invert_emission(target, cfg.cavity);
  const auto final = cfg.refine_enabled ? control::refine_control(seed.control, target, cfg.cavity, cfg.refine) : seed;
  cavity::AmplitudeState s0;
  s0.c1 = 1.0;
  const auto traj = cavity::evolve_emission(final.control, cfg.cavity, s0);
  write_control(w, "control", final.control, cfg.cavity);
  w.put("emitted.csv", pulsekit::pulse_to_csv(traj.out_pulse));
  w.json("invert_report.json", {{"target", target_name},
                                {"analytic", report_json(seed, cfg.cavity)},
                                {"final", report_json(final, cfg.cavity)}});
  out << "fidelity " << final.score.fidelity << "\n";
  return kExitOk;
}

int cmd_emit(const RunConfig& cfg, const std::string& control_csv, const std::string& params_json,
             std::ostream& out) {
  Writer w(cfg.out_dir, out);
  cavity::CavityParams p;
  const auto c = read_control(control_csv, params_json, &p);
  cavity::AmplitudeState s0;
  s0.c1 = 1.0;
  const auto traj = cavity::evolve_emission(c, p, s0);
  const auto adi = cavity::adiabaticity_diagnostics(traj, c, p);
  w.put("emit_trajectory.csv", cavity::trajectory_to_csv(traj, cfg.stride));
  w.put("emitted.csv", pulsekit::pulse_to_csv(traj.out_pulse));
  w.json("emit_summary.json", {{"emitted_norm", pulsekit::norm_squared(traj.out_pulse)},
                               {"residual_population", traj.residual_population()},
                               {"flux_residual", flux_end(traj)},
                               {"max_c_zero", adi.max_c_zero},
                               {"max_c_e", adi.max_c_e},
                               {"max_theta_dot_over_g0", adi.max_theta_dot_over_g0},
                               {"adiabatic", adi.adiabatic}});
  return kExitOk;
}

int cmd_absorb(const RunConfig& cfg, const std::string& control_csv, const std::string& params_json,
               const std::string& input_name, std::ostream& out) {
  Writer w(cfg.out_dir, out);
  cavity::CavityParams p;
  const auto c = read_control(control_csv, params_json, &p);
  const SampledPulse input = resolve_pulse(input_name, cfg);
  const auto traj = cavity::absorb_with_ramp(c, p, input, cavity::default_ramp(p));
  w.put("absorb_trajectory.csv", cavity::trajectory_to_csv(traj, cfg.stride));
  w.put("reflected.csv", pulsekit::pulse_to_csv(traj.out_pulse));
  const double prob = traj.terminal_absorption();
  w.json("absorb_summary.json", {{"input", input_name},
                                 {"absorption", prob},
                                 {"amplitude", std::sqrt(prob)},
                                 {"flux_residual", cavity::flux_balance(traj, pulsekit::zero_extended(input, traj.grid)).back()}});
  out << "absorption " << prob << "\n";
  return kExitOk;
}

int cmd_catch(const RunConfig& cfg, const std::string& input_name, std::ostream& out) {
  Writer w(cfg.out_dir, out);
  const SampledPulse input = resolve_pulse(input_name, cfg);
  control::CatchOptions opts;
  opts.refine = cfg.refine_enabled;
  opts.refine_options = cfg.refine;
  const auto r = control::catch_control(input, cfg.cavity, opts);
  write_control(w, "catch_control", r.control, cfg.cavity);
  w.json("catch_summary.json", {{"input", input_name},
                                {"verified_absorption", r.verified_absorption},
                                {"max_omega_over_g0", r.control.max_abs() / cfg.cavity.g0}});
  out << "verified absorption " << r.verified_absorption << "\n";
  return kExitOk;
}

void write_fig2(const RunConfig& cfg, Writer& w) {
  const Fig2Data d = compute_fig2(cfg);
  const double g0 = cfg.cavity.g0;
  const auto& grid = d.targets.f_a.grid;
  w.put("fig2a_pulses.csv",
        columns_csv(grid, {"f_a", "f_b", "out1_re", "out1_im", "out2_re", "out2_im"},
                    {re(d.targets.f_a), re(d.targets.f_b), re(d.a.trajectory.out_pulse), im(d.a.trajectory.out_pulse),
                     re(d.b.trajectory.out_pulse), im(d.b.trajectory.out_pulse)},
                    cfg.stride));
  w.put("fig2b_controls.csv", columns_csv(grid, {"omega1_over_g0", "omega2_over_g0"},
                                          {over_g0(d.a.final.control, g0), over_g0(d.b.final.control, g0)}, cfg.stride));
  w.put("fig2c_trajectory.csv", cavity::trajectory_to_csv(d.a.trajectory, cfg.stride));
  w.put("fig2d_trajectory.csv", cavity::trajectory_to_csv(d.b.trajectory, cfg.stride));
  auto entry = [&](const Fig2Target& t) {
    return ordered_json{{"fidelity", t.final.score.fidelity},
                        {"emitted_norm", t.final.score.emitted_norm},
                        {"analytic_fidelity", t.seed.score.fidelity},
                        {"refine_evaluations", t.final.evaluations},
                        {"max_omega_over_g0", t.final.control.max_abs() / g0},
                        {"flux_residual", flux_end(t.trajectory)}};
  };
  w.json("fig2_summary.json", {{"overlap_f_a_f_b", pulsekit::overlap(d.targets.f_a, d.targets.f_b).real()},
                               {"f_a", entry(d.a)},
                               {"f_b", entry(d.b)}});
}

void write_fig3(const RunConfig& cfg, Writer& w) {
  const Fig3Data d = compute_fig3(cfg);
  const double g0 = cfg.cavity.g0;
  w.put("fig3a_controls.csv", columns_csv(d.omega_a.grid, {"f_a", "f_b", "omega_a_over_g0", "omega_b_over_g0"},
                                          {re(d.targets.f_a), re(d.targets.f_b), over_g0(d.omega_a, g0),
                                           over_g0(d.omega_b, g0)},
                                          cfg.stride));
  const char* panels[] = {"fig3b", "fig3c", "fig3d", "fig3e"};
  ordered_json amps;
  for (std::size_t k = 0; k < 4; ++k) {
    w.put(std::string(panels[k]) + "_" + Fig3Data::kLabels[k] + "_trajectory.csv",
          cavity::trajectory_to_csv(d.runs[k], cfg.stride));
    amps[std::string("c_") + Fig3Data::kLabels[k]] = d.amplitude(k);
  }
  amps["overlap_f_a_f_b"] = pulsekit::overlap(d.targets.f_a, d.targets.f_b).real();
  w.json("fig3_summary.json", amps);
}

void write_fig4(const RunConfig& cfg, Writer& w) {
  const auto alphabet = pulsekit::build_alphabet(cfg.cavity, cfg.bin_sigma_T * cfg.cavity.T, cfg.grid(cfg.cavity.n));
  const protocol::PhysicsCache physics(cfg.cavity, alphabet);
  const Fig4Data d = compute_fig4(cfg, physics);
  ordered_json mid;
  ordered_json fin;
  ordered_json matched = ordered_json::array();
  ordered_json crossed = ordered_json::array();
  for (const auto& p : d.pairs) {
    const auto traj = physics.trajectory(protocol::pulse_of(p.symbol), p.rx);
    std::vector<double> p1;
    for (const auto& s : traj.states) p1.push_back(std::norm(s.c1));
    w.put("fig4_" + p.label() + ".csv", columns_csv(traj.grid, {"p1"}, {p1}, cfg.stride));
    mid[p.label()] = p.p.p1_mid;
    fin[p.label()] = p.p.p1_final;
    (p.matched ? matched : crossed).push_back(p.label());
  }
  w.json("fig4_summary.json", {{"mid_time_T", physics.mid_time() / cfg.cavity.T},
                               {"matched", matched},
                               {"crossed", crossed},
                               {"p1_mid", mid},
                               {"p1_final", fin}});
}

int cmd_figure(const RunConfig& cfg, const std::string& which, std::ostream& out) {
  Writer w(cfg.out_dir, out);
  if (which == "fig2") write_fig2(cfg, w);
  else if (which == "fig3") write_fig3(cfg, w);
  else write_fig4(cfg, w);
  return kExitOk;
}

int cmd_protocol(const RunConfig& cfg, std::ostream& out) {
  Writer w(cfg.out_dir, out);
  const auto alphabet = pulsekit::build_alphabet(cfg.cavity, cfg.bin_sigma_T * cfg.cavity.T, cfg.grid(cfg.cavity.n));
  const protocol::PhysicsCache physics(cfg.cavity, alphabet);
  const auto result = protocol::run_session(cfg.protocol, physics);
  w.put("transcript.csv", protocol::transcript_to_csv(result.transcript));
  w.put("check_report.json", protocol::check_report_to_json(result.check));
  const auto bits = result.decoded_bits();
  std::size_t errors = 0;
  for (const auto& c : result.transcript) {
    if (c.decoded && *c.decoded != c.bit_sent) ++errors;
  }
  w.json("protocol_summary.json", {{"seed", cfg.seed},
                                   {"eve", std::string(protocol::to_string(cfg.protocol.eve.kind))},
                                   {"verdict", std::string(protocol::to_string(result.check.verdict))},
                                   {"check_done_time_T", result.check_done_time / cfg.cavity.T},
                                   {"second_bin_release_T", result.second_bin_release / cfg.cavity.T},
                                   {"delivered_second_bins", result.delivered_second_bins},
                                   {"decoded_bits", bits.size()},
                                   {"bit_errors", errors},
                                   {"empty_check_warning", result.empty_check_warning}});
  out << "verdict " << protocol::to_string(result.check.verdict) << " (z_r " << result.check.z_r << ", z_nr "
      << result.check.z_nr << ")\n";
  return result.check.verdict == protocol::Verdict::abort ? kExitAbort : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon pulse shaping and time-bin QSDC simulator", "pulseqsdc"};
  Globals g;
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--seed", g.seed, "override the configured seed");
  app.add_option("--out", g.out, "override the output directory (must exist)");
  app.add_option("--stride", g.stride, "write every k-th trajectory row");
  app.require_subcommand(1);

  auto* alphabet = app.add_subcommand("alphabet", "write the four symbol pulses and the constraint report");
  std::string target;
  auto* invert = app.add_subcommand("invert", "find the drive that emits a target pulse");
  invert->add_option("--target", target, "f_a, f_b, a symbol name or a pulse CSV")->required();
  std::string control_csv;
  std::string control_params;
  auto* emit = app.add_subcommand("emit", "simulate emission under a control");
  emit->add_option("--control", control_csv, "control CSV")->required();
  emit->add_option("--params", control_params, "companion params JSON")->required();
  std::string input;
  auto* absorb = app.add_subcommand("absorb", "simulate absorption of a pulse under a control");
  absorb->add_option("--control", control_csv, "control CSV")->required();
  absorb->add_option("--params", control_params, "companion params JSON")->required();
  absorb->add_option("--input", input, "f_a, f_b, a symbol name or a pulse CSV")->required();
  auto* catcher = app.add_subcommand("catch", "find the drive that absorbs a pulse");
  catcher->add_option("--input", input, "f_a, f_b, a symbol name or a pulse CSV")->required();
  std::string which;
  auto* figure = app.add_subcommand("figure", "write plot data for one figure");
  figure->add_option("which", which, "fig2, fig3 or fig4")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  auto* proto = app.add_subcommand("protocol", "run one protocol session");
  for (auto* sub : {alphabet, invert, emit, absorb, catcher, figure, proto}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig cfg = load(g);
    if (cfg.cavity.weak_coupling_advisory()) {
      err << "warning: g0 < 10 kappa, outside the strong-coupling regime the model assumes\n";
    }
    if (*alphabet) return cmd_alphabet(cfg, out);
    if (*invert) return cmd_invert(cfg, target, out);
    if (*emit) return cmd_emit(cfg, control_csv, control_params, out);
    if (*absorb) return cmd_absorb(cfg, control_csv, control_params, input, out);
    if (*catcher) return cmd_catch(cfg, input, out);
    if (*figure) return cmd_figure(cfg, which, out);
    return cmd_protocol(cfg, out);
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << " (needs at least " << e.required_samples() << " samples)\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace pulseqsdc::cli
