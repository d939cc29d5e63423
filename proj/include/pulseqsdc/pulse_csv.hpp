#pragma once

#include <string>
#include <string_view>

#include "pulseqsdc/pulse.hpp"

namespace pulseqsdc::pulsekit {

/// `t,re,im` with one row per sample.
std::string pulse_to_csv(const SampledPulse& f);

/// Inverse of pulse_to_csv. Rows must be uniformly spaced in t.
SampledPulse pulse_from_csv(std::string_view text);

}  // namespace pulseqsdc::pulsekit
