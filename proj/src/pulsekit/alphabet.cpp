#include "pulseqsdc/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pulseqsdc::pulsekit {

std::string_view to_string(Symbol s) {
  switch (s) {
    case Symbol::alpha: return "alpha";
    case Symbol::beta: return "beta";
    case Symbol::gamma: return "gamma";
    case Symbol::mu: return "mu";
  }
  return "?";
}

Symbol symbol_from_string(std::string_view name) {
  for (Symbol s : kAllSymbols) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown symbol '" + std::string(name) + "'");
}

const SampledPulse& PulseAlphabet::get(Symbol s) const {
  switch (s) {
    case Symbol::alpha: return alpha;
    case Symbol::beta: return beta;
    case Symbol::gamma: return gamma;
    case Symbol::mu: return mu;
  }
  throw std::logic_error("bad symbol");
}

SampledPulse& PulseAlphabet::get(Symbol s) {
  return const_cast<SampledPulse&>(static_cast<const PulseAlphabet&>(*this).get(s));
}

PulseAlphabet build_alphabet(const cavity::CavityParams& params, double bin_sigma, const TimeGrid& grid) {
  params.validate();
  if (!(bin_sigma > 0.0)) throw std::invalid_argument("alphabet: bin_sigma must be > 0");
  const double T = params.T;
  const double horizon = params.n * T;
  if (grid.t_start() != 0.0 || std::abs(grid.t_end() - horizon) > 1e-9 * horizon) {
    throw std::invalid_argument("alphabet grid must span [0, nT]");
  }

  const double second_center = (params.n - 0.5) * T;
  const SampledPulse x = gaussian_bin(0.5 * T, bin_sigma, grid);
  const SampledPulse y = gaussian_bin(second_center, bin_sigma, grid);
  const SampledPulse x_mixed = scaled(added(x, hermite_odd_bin(0.5 * T, bin_sigma, grid)), M_SQRT1_2);
  const SampledPulse y_mixed = scaled(added(y, hermite_odd_bin(second_center, bin_sigma, grid)), M_SQRT1_2);

  return PulseAlphabet{
      .alpha = scaled(added(x, y), M_SQRT1_2),
      .beta = scaled(added(x_mixed, y_mixed), M_SQRT1_2),
      .gamma = scaled(added(x, y, -1.0), M_SQRT1_2),
      .mu = scaled(added(x_mixed, y_mixed, -1.0), M_SQRT1_2),
      .first_bin_end = T,
      .second_bin_start = (params.n - 1) * T,
  };
}

PulseAlphabet build_alphabet(const cavity::CavityParams& params, double bin_sigma) {
  return build_alphabet(params, bin_sigma, cavity::default_grid(params, params.n));
}

bool ConstraintReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const ConstraintResult& r) { return r.pass; });
}

const ConstraintResult& ConstraintReport::at(std::string_view name) const {
  for (const auto& r : results) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no constraint named " + std::string(name));
}

ConstraintReport validate_alphabet(const PulseAlphabet& a) {
  ConstraintReport report;
  auto check = [&](std::string name, double value, double expected, double tol) {
    const double residual = std::abs(value - expected);
    report.results.push_back({std::move(name), value, expected, residual, tol, residual <= tol});
  };

  const double t0 = a.grid().t_start();
  const double t_end = a.horizon();
  const double inv_2sqrt2 = 1.0 / (2.0 * std::sqrt(2.0));

  for (Symbol s : kAllSymbols) {
    const SampledPulse& f = a.get(s);
    const std::string tag(to_string(s));
    check("norm_" + tag, norm_squared(f), 1.0, 1e-4);
    check("first_bin_" + tag, norm_squared_between(f, t0, a.first_bin_end), 0.5, 1e-3);
    check("second_bin_" + tag, norm_squared_between(f, a.second_bin_start, t_end), 0.5, 1e-3);

    // Open interval (T, (n-1)T): skip the boundary samples themselves.
    double peak = 0.0;
    double quiet = 0.0;
    const std::size_t i_lo = f.grid.index_at(a.first_bin_end);
    const std::size_t i_hi = f.grid.index_at(a.second_bin_start);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double m = std::abs(f.amps[i]);
      peak = std::max(peak, m);
      if (i > i_lo && i < i_hi) quiet = std::max(quiet, m);
    }
    const double ratio = peak > 0.0 ? quiet / peak : 1.0;
    report.results.push_back({"quiet_middle_" + tag, ratio, 0.0, ratio, 1e-3, ratio < 1e-3});
  }

  check("first_bin_alpha_beta", std::real(overlap_between(a.alpha, a.beta, t0, a.first_bin_end)), inv_2sqrt2, 1e-3);
  check("first_bin_gamma_mu", std::real(overlap_between(a.gamma, a.mu, t0, a.first_bin_end)), inv_2sqrt2, 1e-3);
  check("orthogonal_alpha_gamma", std::abs(overlap(a.alpha, a.gamma)), 0.0, 1e-3);
  check("orthogonal_beta_mu", std::abs(overlap(a.beta, a.mu)), 0.0, 1e-3);
  return report;
}

}  // namespace pulseqsdc::pulsekit
