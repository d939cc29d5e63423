#include "pulseqsdc/trajectory_csv.hpp"

#include <stdexcept>

#include "pulseqsdc/text_io.hpp"

namespace pulseqsdc::cavity {

std::string trajectory_to_csv(const AmplitudeTrajectory& traj, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be >= 1");
  std::string out = "t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,re_out,im_out\n";
  const std::size_t n = traj.states.size();
  auto row = [&](std::size_t k) {
    const auto& s = traj.states[k];
    const cplx o = traj.out_pulse.amps[k];
    for (double v : {traj.grid.time(k), s.c1.real(), s.c1.imag(), s.c2.real(), s.c2.imag(), s.c3.real(),
                     s.c3.imag(), o.real()}) {
      out += io::format_double(v);
      out += ',';
    }
    out += io::format_double(o.imag());
    out += '\n';
  };
  for (std::size_t k = 0; k < n; k += stride) row(k);
  if ((n - 1) % stride != 0) row(n - 1);
  return out;
}

}  // namespace pulseqsdc::cavity
