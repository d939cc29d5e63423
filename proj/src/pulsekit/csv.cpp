#include "pulseqsdc/pulse_csv.hpp"

#include <cmath>
#include <stdexcept>

#include "pulseqsdc/text_io.hpp"

namespace pulseqsdc::pulsekit {

std::string pulse_to_csv(const SampledPulse& f) {
  std::string out = "t,re,im\n";
  out.reserve(f.size() * 64);
  for (std::size_t i = 0; i < f.size(); ++i) {
    out += io::format_double(f.time(i));
    out += ',';
    out += io::format_double(f.amps[i].real());
    out += ',';
    out += io::format_double(f.amps[i].imag());
    out += '\n';
  }
  return out;
}

SampledPulse pulse_from_csv(std::string_view text) {
  const auto rows = io::read_csv_rows(text, "t,re,im");
  if (rows.size() < 2) throw std::invalid_argument("pulse CSV needs at least 2 rows");
  std::vector<cplx> amps;
  amps.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 3) throw std::invalid_argument("pulse CSV row must have 3 fields");
    amps.emplace_back(io::parse_double(r[1]), io::parse_double(r[2]));
  }
  const TimeGrid grid(io::parse_double(rows.front()[0]), io::parse_double(rows.back()[0]), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(io::parse_double(rows[i][0]) - grid.time(i)) > 1e-6 * grid.dt()) {
      throw std::invalid_argument("pulse CSV times are not uniformly spaced (row " + std::to_string(i + 1) + ")");
    }
  }
  return SampledPulse(grid, std::move(amps));
}

}  // namespace pulseqsdc::pulsekit
