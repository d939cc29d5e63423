#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pulseqsdc/inversion.hpp"

namespace pulseqsdc::control {
namespace {

// Full-model emission scored incrementally so that a knot change only
// re-integrates from two knots before it.
class KnotObjective {
 public:
  KnotObjective(const ControlEnvelope& seed, const SampledPulse& target, const CavityParams& params,
                std::size_t knots)
      : seed_(seed), target_(target), params_(params), sqrt_kappa_(std::sqrt(params.kappa)) {
    const auto& g = seed.grid;
    knots = std::max<std::size_t>(knots, 2);
    for (std::size_t j = 0; j < knots; ++j) {
      xs_.push_back(g.t_start() + g.span() * static_cast<double>(j) / static_cast<double>(knots - 1));
      idx_.push_back(g.index_at(xs_.back()));
    }
    target_norm_ = pulsekit::norm_squared(target);
    cache_.resize(knots);
  }

  std::size_t knots() const { return xs_.size(); }

  // Builds the control for `delta` and evaluates from knot `first` using the
  // cached state there. Fills `trial` with the new per-knot cache entries.
  double evaluate(const std::vector<double>& delta, std::size_t first, std::vector<double>& omega) {
    const auto slopes = pchip_slopes(xs_, delta);
    const std::size_t lo = idx_[first];
    const std::size_t hi = first + 4 < knots() ? idx_[first + 4] : seed_.size() - 1;
    for (std::size_t k = lo; k <= hi; ++k) {
      omega[k] = seed_.omega[k] * std::exp(pchip_eval(xs_, delta, slopes, seed_.grid.time(k)));
    }
    const ControlEnvelope c(seed_.grid, omega);

    const double dt = seed_.grid.dt();
    const std::size_t n = seed_.size();
    const Entry start = first == 0 ? Entry{{1.0, 0.0, 0.0}, 0.0, 0.0} : cache_[first];
    trial_ = cache_;
    double norm = start.norm_sum;
    cplx ov = start.overlap_sum;
    std::size_t next_knot = first;
    cavity::emit_streaming(
        c, params_, start.state,
        [&](std::size_t k, const cavity::AmplitudeState& s) {
          while (next_knot < knots() && idx_[next_knot] == k) {
            trial_[next_knot] = Entry{s, norm, ov};
            ++next_knot;
          }
          const double w = (k == 0 || k + 1 == n) ? 0.5 * dt : dt;
          const cplx out = sqrt_kappa_ * s.c3;
          norm += w * std::norm(out);
          ov += w * std::conj(target_.amps[k]) * out;
        },
        idx_[first]);
    return std::max(norm + target_norm_ - 2.0 * std::abs(ov), 0.0);
  }

  void commit() { cache_ = trial_; }

 private:
  struct Entry {
    cavity::AmplitudeState state;
    double norm_sum = 0.0;
    cplx overlap_sum = 0.0;
  };

  const ControlEnvelope& seed_;
  const SampledPulse& target_;
  const CavityParams& params_;
  double sqrt_kappa_;
  double target_norm_ = 0.0;
  std::vector<double> xs_;
  std::vector<std::size_t> idx_;
  std::vector<Entry> cache_;
  std::vector<Entry> trial_;
};

}  // namespace

InversionReport refine_control(const ControlEnvelope& seed, const SampledPulse& target, const CavityParams& params,
                               const RefineOptions& opts) {
  if (!seed.grid.matches(target.grid)) throw std::invalid_argument("seed and target grids differ");

  InversionReport report{seed, 1.0, 0.0, 0.0, {}, false, 0, {}};
  if (opts.max_evaluations == 0) {
    report.score = emission_fidelity(seed, target, params);
    report.infidelity = 1.0 - report.score.fidelity;
    report.note = "no evaluation budget; seed returned unchanged";
    return report;
  }

  KnotObjective objective(seed, target, params, opts.knots);
  std::vector<double> delta(objective.knots(), 0.0);
  std::vector<double> best_omega = seed.omega;
  std::vector<double> trial_omega = seed.omega;

  double best = objective.evaluate(delta, 0, trial_omega);
  objective.commit();
  std::size_t evals = 1;
  double step = opts.initial_step;
  bool improved = false;

  while (evals < opts.max_evaluations && step >= opts.min_step) {
    bool sweep_improved = false;
    for (std::size_t j = 0; j < objective.knots() && evals < opts.max_evaluations; ++j) {
      const std::size_t first = j >= 2 ? j - 2 : 0;
      for (double dir : {1.0, -1.0}) {
        if (evals >= opts.max_evaluations) break;
        delta[j] += dir * step;
        trial_omega = best_omega;
        const double v = objective.evaluate(delta, first, trial_omega);
        ++evals;
        if (v < best - opts.tolerance) {
          best = v;
          best_omega = trial_omega;
          objective.commit();
          sweep_improved = improved = true;
          break;
        }
        delta[j] -= dir * step;
      }
    }
    if (!sweep_improved) step *= 0.5;
  }

  report.control = improved ? ControlEnvelope(seed.grid, best_omega) : seed;
  report.improved = improved;
  report.evaluations = evals;
  report.score = emission_fidelity(report.control, target, params);
  report.infidelity = 1.0 - report.score.fidelity;
  report.residual_population = report.score.residual_population;
  if (!improved) report.note = "budget exhausted without improvement; seed returned";
  return report;
}

}  // namespace pulseqsdc::control
