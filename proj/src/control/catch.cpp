#include <stdexcept>
#include <vector>

#include "pulseqsdc/inversion.hpp"

namespace pulseqsdc::control {

CatchResult catch_control(const SampledPulse& input, const CavityParams& params, const CatchOptions& opts) {
  if (!(pulsekit::norm_squared(input) > 0.0)) throw std::invalid_argument("cannot catch a zero pulse");
  const SampledPulse mode = pulsekit::normalized(input);
  const SampledPulse reversed_target =
      pulsekit::with_norm_squared(pulsekit::time_reversed_conjugate(mode), 1.0 - kTargetReserve);

  ControlEnvelope emission = analytic_control(reversed_target, params, opts.limits);
  if (opts.refine) {
    emission = refine_control(emission, reversed_target, params, opts.refine_options).control;
  }
  CatchResult result{reversed(emission)};

  // The drive's overall sign is a free phase; fix it so the matched input ends
  // in the dark state with amplitude +1, i.e. J(t_end, .) lines up with input*.
  const std::vector<double> J = cavity::kernel_J_terminal(result.control, params);
  std::vector<cplx> weighted(J.size());
  for (std::size_t k = 0; k < J.size(); ++k) weighted[k] = J[k] * mode.amps[k];
  if (pulsekit::trapezoid(weighted, input.grid.dt()).real() < 0.0) {
    for (double& w : result.control.omega) w = -w;
  }
  if (opts.verify) {
    result.verified_absorption =
        cavity::absorb_with_ramp(result.control, params, mode, cavity::default_ramp(params)).terminal_absorption();
  }
  return result;
}

}  // namespace pulseqsdc::control
