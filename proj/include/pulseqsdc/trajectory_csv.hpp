#pragma once

#include <cstddef>
#include <string>

#include "pulseqsdc/dynamics.hpp"

namespace pulseqsdc::cavity {

/// `t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,re_out,im_out`, every `stride`-th
/// step; the last step is always included.
std::string trajectory_to_csv(const AmplitudeTrajectory& traj, std::size_t stride = 1);

}  // namespace pulseqsdc::cavity
