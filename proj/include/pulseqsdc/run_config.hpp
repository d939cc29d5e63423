#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulseqsdc/inversion.hpp"
#include "pulseqsdc/params.hpp"
#include "pulseqsdc/protocol.hpp"

namespace pulseqsdc::cli {

/// Everything a command needs, read from one JSON file. Every key is required
/// and unknown keys are rejected, so the shipped default.json is the only
/// source of defaults. Times are in units of T, rates in units of kappa.
struct RunConfig {
  cavity::CavityParams cavity;
  std::optional<std::size_t> samples_per_T;  // empty for "auto"
  double bin_sigma_T = 0.0;

  double fa_center_T = 0.0;
  double fa_sigma_T = 0.0;
  std::vector<double> fb_centers_T;
  std::vector<double> fb_sigmas_T;
  double fb_overlap = 0.0;

  bool refine_enabled = false;
  control::RefineOptions refine;

  protocol::ProtocolConfig protocol;  // protocol.seed mirrors `seed`
  std::uint64_t seed = 0;

  std::filesystem::path out_dir;
  std::size_t stride = 1;

  /// Grid on [0, duration_in_T * T] at the configured resolution.
  pulsekit::TimeGrid grid(double duration_in_T) const;
  void set_seed(std::uint64_t s);
};

/// Throws std::invalid_argument naming the offending key.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace pulseqsdc::cli
