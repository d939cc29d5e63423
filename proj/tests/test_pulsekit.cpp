#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "pulseqsdc/alphabet.hpp"
#include "pulseqsdc/pulse_csv.hpp"
#include "pulseqsdc/targets.hpp"
#include "pulseqsdc/text_io.hpp"

using namespace pulseqsdc;
using namespace pulseqsdc::pulsekit;

namespace {

// Complex test pulse: a Gaussian carrying a linear phase.
SampledPulse chirped(double center, double sigma, double freq, const TimeGrid& g) {
  SampledPulse p = gaussian_bin(center, sigma, g);
  for (std::size_t i = 0; i < g.size(); ++i) p.amps[i] *= std::polar(1.0, freq * g.time(i));
  return p;
}

cavity::CavityParams fig_params() { return cavity::CavityParams::from_ratios(100.0, 100.0, 3); }

}  // namespace

TEST_CASE("make_grid spacing") {
  CHECK(make_grid(0.0, 1.0, 2001).dt() == doctest::Approx(1.0 / 2000).epsilon(1e-15));
  CHECK(make_grid(0.0, 3.0, 6001).dt() == doctest::Approx(1.0 / 2000).epsilon(1e-15));
  CHECK_THROWS_AS(make_grid(1.0, 0.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0.0, INFINITY, 10), std::invalid_argument);
}

TEST_CASE("grid lookup clamps to the ends") {
  const TimeGrid g(0.0, 1.0, 11);
  CHECK(g.index_at(-5.0) == 0);
  CHECK(g.index_at(0.34) == 3);
  CHECK(g.index_at(7.0) == 10);
  CHECK(g.extended(5).t_end() == doctest::Approx(1.5));
  CHECK(g.matches(TimeGrid(0.0, 1.0 + 1e-14, 11)));
  CHECK_FALSE(g.matches(TimeGrid(0.0, 1.0, 12)));
}

TEST_CASE("trapezoid is exact for linear integrands") {
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};  // 1 + 2t on [0, 3]
  CHECK(trapezoid(y, 1.0) == doctest::Approx(12.0));
  const auto cum = cumulative_trapezoid(y, 1.0);
  CHECK(cum[0] == 0.0);
  CHECK(cum[2] == doctest::Approx(6.0));
}

TEST_CASE("gaussian bin") {
  const TimeGrid g(0.0, 1.0, 20001);
  bool truncated = true;
  const SampledPulse f = gaussian_bin(0.5, 0.1, g, &truncated);
  CHECK_FALSE(truncated);
  CHECK(norm_squared(f) == doctest::Approx(1.0).epsilon(1e-6));
  std::size_t peak = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f.amps[i]) > std::abs(f.amps[peak])) peak = i;
  }
  CHECK(g.time(peak) == doctest::Approx(0.5));
  CHECK(std::abs(overlap(f, f) - 1.0) < 1e-6);
  CHECK_THROWS_AS(gaussian_bin(0.5, 0.0, g), std::invalid_argument);
  gaussian_bin(0.05, 0.1, g, &truncated);
  CHECK(truncated);
}

TEST_CASE("overlap of shifted Gaussians matches the closed form") {
  const TimeGrid g(0.0, 1.0, 20001);
  const double s1 = 0.06;
  const double s2 = 0.08;
  const double d = 0.1;
  const auto a = gaussian_bin(0.45, s1, g);
  const auto b = gaussian_bin(0.45 + d, s2, g);
  const double expected = std::sqrt(2 * s1 * s2 / (s1 * s1 + s2 * s2)) * std::exp(-d * d / (2 * (s1 * s1 + s2 * s2)));
  CHECK(std::abs(overlap(a, b) - expected) < 1e-6);
}

TEST_CASE("overlap of disjoint pulses vanishes") {
  const TimeGrid g(0.0, 1.0, 1001);
  const auto a = windowed(gaussian_bin(0.25, 0.05, g), 0.0, 0.4);
  const auto b = windowed(gaussian_bin(0.75, 0.05, g), 0.6, 1.0);
  CHECK(std::abs(overlap(a, b)) < 1e-9);
  CHECK_THROWS_AS(overlap(a, gaussian_bin(0.5, 0.1, TimeGrid(0.0, 1.0, 1002))), std::invalid_argument);
}

TEST_CASE("overlap symmetry, Cauchy-Schwarz and phase covariance") {
  const TimeGrid g(0.0, 1.0, 4001);
  const std::vector<SampledPulse> pulses{chirped(0.4, 0.1, 3.0, g), scaled(chirped(0.6, 0.07, -11.0, g), 0.7),
                                         hermite_odd_bin(0.5, 0.1, g), scaled(gaussian_bin(0.3, 0.2, g), 1.9)};
  for (const auto& a : pulses) {
    for (const auto& b : pulses) {
      CHECK(std::abs(overlap(a, b) - std::conj(overlap(b, a))) < 1e-12);
      CHECK(std::abs(overlap(a, b)) <= std::sqrt(norm_squared(a) * norm_squared(b)) * (1 + 1e-12));
      const cplx phase = std::polar(1.0, 0.83);
      CHECK(std::abs(overlap(a, scaled(b, phase)) - phase * overlap(a, b)) < 1e-12);
      CHECK(std::norm(overlap(scaled(a, phase), scaled(b, phase))) ==
            doctest::Approx(std::norm(overlap(a, b))).epsilon(1e-12));
    }
  }
}

TEST_CASE("odd Hermite mode builds the 1/sqrt(2) partner") {
  const TimeGrid g(0.0, 1.0, 20001);
  const auto x = gaussian_bin(0.5, 0.1, g);
  const auto xp = hermite_odd_bin(0.5, 0.1, g);
  CHECK(std::abs(overlap(x, xp)) < 1e-12);
  CHECK(norm_squared(xp) == doctest::Approx(1.0).epsilon(1e-12));
  const auto mixed = scaled(added(x, xp), M_SQRT1_2);
  CHECK(overlap(x, mixed).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-12));
}

TEST_CASE("pulse transformations") {
  const TimeGrid g(0.0, 1.0, 1001);
  const auto f = chirped(0.3, 0.1, 5.0, g);
  const auto rr = time_reversed_conjugate(time_reversed_conjugate(f));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(rr.amps[i] == f.amps[i]);
  const auto r = time_reversed_conjugate(f);
  CHECK(r.amps[0] == std::conj(f.amps.back()));
  CHECK(norm_squared(with_norm_squared(f, 0.25)) == doctest::Approx(0.25));
  const auto longer = zero_extended(f, TimeGrid(0.0, 2.0, 2001));
  CHECK(norm_squared(longer) == doctest::Approx(norm_squared(f)).epsilon(1e-12));
  CHECK(longer.amps[1500] == cplx{0.0});
  CHECK(l2_distance(f, f) == 0.0);
  CHECK(l2_distance_phase_aligned(f, scaled(f, std::polar(1.0, 2.0))) < 1e-7);
  CHECK(l2_distance(f, scaled(f, -1.0)) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("alphabet satisfies every constraint") {
  const auto a = build_alphabet(fig_params(), 0.1);
  const auto report = validate_alphabet(a);
  for (const auto& r : report.results) {
    INFO(r.name << " residual " << r.residual);
    CHECK(r.pass);
  }
  // Closed-form values for the explicit construction.
  CHECK(std::abs(overlap(a.alpha, a.gamma)) < 1e-3);
  CHECK(std::abs(overlap_between(a.alpha, a.beta, 0.0, 1.0).real() - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-3);
  CHECK(std::abs(norm_squared_between(a.alpha, 0.0, 1.0) - 0.5) < 1e-3);
  for (Symbol s : kAllSymbols) CHECK(norm_squared(a.get(s)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("alphabet report flags broken alphabets") {
  auto a = build_alphabet(fig_params(), 0.1);
  auto scaled_alpha = a;
  scaled_alpha.alpha = scaled(a.alpha, 1.1);
  const auto r1 = validate_alphabet(scaled_alpha);
  CHECK_FALSE(r1.all_pass());
  CHECK(r1.at("norm_alpha").residual == doctest::Approx(1.1 * 1.1 - 1.0).epsilon(1e-4));

  auto copied = a;
  copied.gamma = a.alpha;
  const auto r2 = validate_alphabet(copied);
  CHECK(r2.at("orthogonal_alpha_gamma").residual == doctest::Approx(1.0).epsilon(1e-6));

  const auto wide = validate_alphabet(build_alphabet(fig_params(), 1.0, TimeGrid(0.0, 3.0, 6001)));
  CHECK_FALSE(wide.at("quiet_middle_alpha").pass);
}

TEST_CASE("alphabet overlaps converge with resolution") {
  const auto p = fig_params();
  const auto coarse = build_alphabet(p, 0.1, TimeGrid(0.0, 3.0, 3 * 2000 + 1));
  const auto fine = build_alphabet(p, 0.1, TimeGrid(0.0, 3.0, 3 * 4000 + 1));
  const double c = overlap(coarse.alpha, coarse.beta).real();
  const double f = overlap(fine.alpha, fine.beta).real();
  CHECK(std::abs(c - f) < 1e-6);
}

TEST_CASE("symbol names") {
  for (Symbol s : kAllSymbols) CHECK(symbol_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(symbol_from_string("delta"), std::invalid_argument);
}

TEST_CASE("three-Gaussian target hits the requested overlap") {
  const TimeGrid g(0.0, 1.0, 20001);
  const auto fa = gaussian_bin(0.5, 0.1, g);
  const auto fb = three_gaussian_target(fa, M_SQRT1_2, {0.3, 0.5, 0.7}, {0.05, 0.04, 0.05});
  CHECK(norm_squared(fb) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap(fa, fb).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-9));
  for (const auto& v : fb.amps) CHECK(v.imag() == 0.0);
  CHECK_THROWS_AS(three_gaussian_target(fa, 0.01, {0.3, 0.5, 0.7}, {0.05, 0.04, 0.05}), std::invalid_argument);
}

TEST_CASE("pulse CSV round trip is bit exact") {
  const TimeGrid g(0.0, 1.0, 101);
  const auto f = chirped(0.5, 0.1, 7.0, g);
  const std::string text = pulse_to_csv(f);
  CHECK(text.rfind("t,re,im\n", 0) == 0);
  const auto back = pulse_from_csv(text);
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.amps[i] == f.amps[i]);
  CHECK(back.grid.matches(f.grid));
  CHECK_THROWS_AS(pulse_from_csv("t,re,im\n0,1,0\n0.1,1,0\n0.5,1,0\n"), std::invalid_argument);
  CHECK_THROWS_AS(pulse_from_csv("x,y\n0,1\n"), std::invalid_argument);
}

TEST_CASE("text io") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::parse_double(io::format_double(M_PI)) == M_PI);
  CHECK_THROWS_AS(io::parse_double("abc"), std::invalid_argument);
  const auto missing = std::filesystem::temp_directory_path() / "pulseqsdc_no_such_dir" / "f.csv";
  try {
    io::write_file_atomic(missing, "x");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("pulseqsdc_no_such_dir") != std::string::npos);
  }
}
