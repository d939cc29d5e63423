#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "pulseqsdc/protocol.hpp"

namespace pulseqsdc::protocol {

std::string_view to_string(Basis b) { return b == Basis::A ? "A" : "B"; }

Symbol encode_bit(int bit, Basis basis) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  if (basis == Basis::A) return bit ? Symbol::alpha : Symbol::gamma;
  return bit ? Symbol::beta : Symbol::mu;
}

int bit_of(Symbol s) { return (s == Symbol::alpha || s == Symbol::beta) ? 1 : 0; }

Basis basis_of(Symbol s) { return (s == Symbol::alpha || s == Symbol::gamma) ? Basis::A : Basis::B; }

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, Party party, std::uint64_t channel)
    : key_(mix64(mix64(seed + kGolden) ^ mix64((static_cast<std::uint64_t>(party) << 56) ^ channel ^ kGolden))) {}

std::uint64_t StreamRng::next() { return mix64(key_ + (++counter_) * kGolden); }

double StreamRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t StreamRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

int measure_atom(double p1, StreamRng& rng) {
  if (!(p1 >= -1e-6 && p1 <= 1.0 + 1e-6)) {
    throw std::invalid_argument("measurement probability outside [0,1]: " + std::to_string(p1));
  }
  p1 = std::clamp(p1, 0.0, 1.0);
  return rng.uniform() < p1 ? 1 : 0;
}

std::string_view to_string(PulseId p) {
  switch (p) {
    case PulseId::alpha: return "alpha";
    case PulseId::beta: return "beta";
    case PulseId::gamma: return "gamma";
    case PulseId::mu: return "mu";
    case PulseId::first_bin_a: return "first_bin_A";
    case PulseId::first_bin_b: return "first_bin_B";
    case PulseId::vacuum: return "vacuum";
  }
  return "?";
}

PulseId pulse_of(Symbol s) {
  switch (s) {
    case Symbol::alpha: return PulseId::alpha;
    case Symbol::beta: return PulseId::beta;
    case Symbol::gamma: return PulseId::gamma;
    case Symbol::mu: return PulseId::mu;
  }
  throw std::logic_error("bad symbol");
}

std::string_view to_string(EveKind k) {
  switch (k) {
    case EveKind::none: return "none";
    case EveKind::intercept_resend_full: return "intercept_resend_full";
    case EveKind::intercept_first_bin: return "intercept_first_bin";
  }
  return "?";
}

EveKind eve_kind_from_string(std::string_view name) {
  for (EveKind k : {EveKind::none, EveKind::intercept_resend_full, EveKind::intercept_first_bin}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown eavesdropper strategy '" + std::string(name) + "'");
}

namespace {

PulseId resent_pulse(EveKind kind, Basis eve_basis, int outcome) {
  if (kind == EveKind::intercept_resend_full) return pulse_of(encode_bit(outcome, eve_basis));
  if (outcome == 0) return PulseId::vacuum;
  return eve_basis == Basis::A ? PulseId::first_bin_a : PulseId::first_bin_b;
}

double eve_p1(EveKind kind, Symbol sent, Basis eve_basis, const PhysicsCache& physics) {
  const ChannelProbabilities p = physics.get(pulse_of(sent), eve_basis);
  return kind == EveKind::intercept_resend_full ? p.p1_final : p.p1_mid;
}

}  // namespace

EveAction eve_apply(const EveStrategy& strategy, Symbol sent, StreamRng& rng, const PhysicsCache& physics) {
  EveAction a;
  a.forwarded = pulse_of(sent);
  if (strategy.kind == EveKind::none) return a;
  // Draw order is fixed (intercept?, basis, outcome) so transcripts stay reproducible.
  const bool intercept = rng.uniform() < strategy.intercept_probability;
  const Basis basis = rng.bit() ? Basis::B : Basis::A;
  const double u = rng.uniform();
  if (!intercept) return a;
  a.intercepted = true;
  a.eve_basis = basis;
  a.outcome = u < std::clamp(eve_p1(strategy.kind, sent, basis, physics), 0.0, 1.0) ? 1 : 0;
  a.forwarded = resent_pulse(strategy.kind, basis, a.outcome);
  return a;
}

ChannelProbabilities transmit_probabilities(Symbol sent, Basis rx, const EveStrategy& eve,
                                            const PhysicsCache& physics) {
  const ChannelProbabilities direct = physics.get(pulse_of(sent), rx);
  if (eve.kind == EveKind::none) return direct;
  const double q = std::clamp(eve.intercept_probability, 0.0, 1.0);
  ChannelProbabilities mixed{(1.0 - q) * direct.p1_mid, (1.0 - q) * direct.p1_final};
  for (Basis b : {Basis::A, Basis::B}) {
    const double p1 = std::clamp(eve_p1(eve.kind, sent, b, physics), 0.0, 1.0);
    for (int outcome : {0, 1}) {
      const double w = q * 0.5 * (outcome ? p1 : 1.0 - p1);
      const ChannelProbabilities r = physics.get(resent_pulse(eve.kind, b, outcome), rx);
      mixed.p1_mid += w * r.p1_mid;
      mixed.p1_final += w * r.p1_final;
    }
  }
  return mixed;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::abort: return "abort";
    case Verdict::warning: return "warning";
  }
  return "?";
}

namespace {

double binomial_z(std::size_t ones, std::size_t count, double p) {
  if (count == 0) return 0.0;
  const double n = static_cast<double>(count);
  return (static_cast<double>(ones) - n * p) / std::sqrt(n * p * (1.0 - p));
}

}  // namespace

Verdict decide_security(CheckReport& r, const SecurityThresholds& t) {
  r.z_r = binomial_z(r.r_ones, r.r_count, t.expected_r);
  r.z_nr = binomial_z(r.nr_ones, r.nr_count, t.expected_nr);
  const bool bad = (r.r_count > 0 && std::abs(r.z_r) > t.z_crit) || (r.nr_count > 0 && std::abs(r.z_nr) > t.z_crit);
  if (bad) r.verdict = Verdict::abort;
  else if (r.r_count == 0 || r.nr_count == 0) r.verdict = Verdict::warning;
  else r.verdict = Verdict::pass;
  return r.verdict;
}

std::string transcript_to_csv(const std::vector<ChannelRecord>& transcript) {
  std::string out = "channel,bit_sent,symbol,rx_basis,match,checked,mid_outcome,aborted,final_outcome,decoded\n";
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
  for (const auto& c : transcript) {
    out += std::to_string(c.index) + ',' + std::to_string(c.bit_sent) + ',' + std::string(pulsekit::to_string(c.symbol)) +
           ',' + std::string(to_string(c.rx_basis)) + ',' + (c.match ? "1" : "0") + ',' + (c.checked ? "1" : "0") +
           ',' + opt(c.mid_outcome) + ',' + (c.aborted ? "1" : "0") + ',' + opt(c.final_outcome) + ',' +
           opt(c.decoded) + '\n';
  }
  return out;
}

std::string check_report_to_json(const CheckReport& r) {
  nlohmann::ordered_json j{{"r_count", r.r_count}, {"r_ones", r.r_ones}, {"nr_count", r.nr_count},
                           {"nr_ones", r.nr_ones}, {"z_r", r.z_r},       {"z_nr", r.z_nr},
                           {"verdict", std::string(to_string(r.verdict))}};
  return j.dump(2) + "\n";
}

std::vector<int> SessionResult::decoded_bits() const {
  std::vector<int> bits;
  for (const auto& c : transcript) {
    if (c.decoded) bits.push_back(*c.decoded);
  }
  return bits;
}

}  // namespace pulseqsdc::protocol
