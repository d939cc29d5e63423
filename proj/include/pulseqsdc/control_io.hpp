#pragma once

#include <string>
#include <string_view>

#include "pulseqsdc/control_envelope.hpp"
#include "pulseqsdc/params.hpp"

namespace pulseqsdc::control {

/// Companion record needed to read a control CSV back: the CSV stores
/// Omega / g0 only. Times are in units of T.
struct ControlParamsRecord {
  double g0_kappa_ratio;
  double kappa_T;
  int n;
  std::size_t grid_samples;

  static ControlParamsRecord from(const cavity::CavityParams& p, std::size_t grid_samples);
  cavity::CavityParams params() const;
};

std::string params_record_to_json(const ControlParamsRecord& r);
ControlParamsRecord params_record_from_json(std::string_view text);

/// `t,omega_over_g0`, one row per sample.
std::string control_to_csv(const ControlEnvelope& c, const cavity::CavityParams& params);

/// Rebuilds Omega = omega_over_g0 * g0; row count must equal record.grid_samples.
ControlEnvelope control_from_csv(std::string_view text, const ControlParamsRecord& record);

}  // namespace pulseqsdc::control
