#include "pulseqsdc/control_io.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "pulseqsdc/text_io.hpp"

namespace pulseqsdc::control {

ControlParamsRecord ControlParamsRecord::from(const cavity::CavityParams& p, std::size_t grid_samples) {
  return {p.g0 / p.kappa, p.kappa * p.T, p.n, grid_samples};
}

cavity::CavityParams ControlParamsRecord::params() const {
  return cavity::CavityParams::from_ratios(kappa_T, g0_kappa_ratio, n);
}

std::string params_record_to_json(const ControlParamsRecord& r) {
  nlohmann::json j{{"g0_kappa_ratio", r.g0_kappa_ratio},
                   {"kappa_T", r.kappa_T},
                   {"n", r.n},
                   {"grid_samples", r.grid_samples}};
  return j.dump(2) + "\n";
}

ControlParamsRecord params_record_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return {j.at("g0_kappa_ratio").get<double>(), j.at("kappa_T").get<double>(), j.at("n").get<int>(),
            j.at("grid_samples").get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad control params record: ") + e.what());
  }
}

std::string control_to_csv(const ControlEnvelope& c, const cavity::CavityParams& params) {
  std::string out = "t,omega_over_g0\n";
  for (std::size_t k = 0; k < c.size(); ++k) {
    out += io::format_double(c.grid.time(k));
    out += ',';
    out += io::format_double(c.omega[k] / params.g0);
    out += '\n';
  }
  return out;
}

ControlEnvelope control_from_csv(std::string_view text, const ControlParamsRecord& record) {
  const auto rows = io::read_csv_rows(text, "t,omega_over_g0");
  if (rows.size() != record.grid_samples) {
    throw std::invalid_argument("control CSV has " + std::to_string(rows.size()) + " rows, params record says " +
                                std::to_string(record.grid_samples));
  }
  if (rows.size() < 2) throw std::invalid_argument("control CSV needs at least 2 rows");
  const cavity::CavityParams p = record.params();
  std::vector<double> w;
  w.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 2) throw std::invalid_argument("control CSV row must have 2 fields");
    w.push_back(io::parse_double(r[1]) * p.g0);
  }
  const pulsekit::TimeGrid grid(io::parse_double(rows.front()[0]), io::parse_double(rows.back()[0]), rows.size());
  return ControlEnvelope(grid, std::move(w));
}

}  // namespace pulseqsdc::control
