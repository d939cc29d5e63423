#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulseqsdc/alphabet.hpp"
#include "pulseqsdc/dynamics.hpp"
#include "pulseqsdc/params.hpp"

namespace pulseqsdc::protocol {

using cavity::CavityParams;
using pulsekit::PulseAlphabet;
using pulsekit::Symbol;

/// Encoding basis. A pairs with the receiver drive Omega_alpha, B with Omega_beta.
enum class Basis { A, B };

std::string_view to_string(Basis b);

/// (1,A)->alpha, (0,A)->gamma, (1,B)->beta, (0,B)->mu.
Symbol encode_bit(int bit, Basis basis);
int bit_of(Symbol s);
Basis basis_of(Symbol s);

// Random streams ------------------------------------------------------------------

enum class Party : std::uint64_t { sender = 1, receiver = 2, eve = 3, check = 4 };

/// Counter-based stream: the k-th draw is SplitMix64(key + k * golden), with the
/// key derived from (seed, party, channel). Streams never share state, so adding
/// a party never perturbs another party's draws.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, Party party, std::uint64_t channel);

  std::uint64_t next();
  double uniform();                    // [0, 1), 53-bit
  bool bit() { return (next() >> 63) != 0; }
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n), unbiased

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Bernoulli(p1) outcome of measuring the atom (1 = |s>). p1 may stray outside
/// [0,1] by 1e-6 (clamped); larger excursions throw std::invalid_argument.
int measure_atom(double p1, StreamRng& rng);

// Physics cache ----------------------------------------------------------------------

/// Pulses that can reach the receiver: the alphabet, the unit first-bin modes an
/// eavesdropper may re-emit, and vacuum.
enum class PulseId { alpha, beta, gamma, mu, first_bin_a, first_bin_b, vacuum };
inline constexpr std::array<PulseId, 7> kAllPulses{PulseId::alpha,       PulseId::beta,        PulseId::gamma,
                                                   PulseId::mu,          PulseId::first_bin_a, PulseId::first_bin_b,
                                                   PulseId::vacuum};
std::string_view to_string(PulseId p);
PulseId pulse_of(Symbol s);

struct ChannelProbabilities {
  double p1_mid;    // |c1|^2 at T + ramp
  double p1_final;  // |c1|^2 at nT + ramp
};

/// Full-model absorption results for every (pulse, receiver basis) pair, computed
/// once at construction and read-only afterwards.
class PhysicsCache {
 public:
  PhysicsCache(const CavityParams& params, const PulseAlphabet& alphabet);

  ChannelProbabilities get(PulseId pulse, Basis rx) const;
  const pulsekit::SampledPulse& pulse(PulseId id) const;
  const control::ControlEnvelope& catch_control(Basis rx) const;  // ramp included
  double mid_time() const { return mid_time_; }
  double ramp() const { return ramp_; }
  const CavityParams& params() const { return params_; }
  const PulseAlphabet& alphabet() const { return alphabet_; }

  /// Re-runs the absorption of `pulse` under `rx` (for plotting); ramp included.
  cavity::AmplitudeTrajectory trajectory(PulseId pulse, Basis rx) const;

 private:
  CavityParams params_;
  PulseAlphabet alphabet_;
  double ramp_;
  double mid_time_;
  std::vector<pulsekit::SampledPulse> pulses_;      // indexed by PulseId, on the alphabet grid
  std::vector<control::ControlEnvelope> controls_;  // indexed by Basis, no ramp
  std::vector<control::ControlEnvelope> ramped_;
  std::array<std::array<ChannelProbabilities, 2>, 7> table_{};
};

// Eavesdropper ---------------------------------------------------------------------------

enum class EveKind { none, intercept_resend_full, intercept_first_bin };
std::string_view to_string(EveKind k);
EveKind eve_kind_from_string(std::string_view name);

/// Individual attack applied to each channel independently. Eve picks her
/// basis uniformly at random from her own stream.
struct EveStrategy {
  EveKind kind = EveKind::none;
  double intercept_probability = 1.0;
};

struct EveAction {
  bool intercepted = false;
  Basis eve_basis = Basis::A;
  int outcome = -1;  // -1 when not intercepted
  PulseId forwarded = PulseId::vacuum;
};

/// intercept_resend_full: absorb with her basis' catch drive, measure at nT,
/// re-emit the bit-1 (outcome 1) or bit-0 (outcome 0) symbol of her basis.
/// intercept_first_bin: measure after the first bin and re-emit her basis'
/// unit first-bin mode on outcome 1, vacuum otherwise.
EveAction eve_apply(const EveStrategy& strategy, Symbol sent, StreamRng& rng, const PhysicsCache& physics);

/// Receiver statistics for `sent` under `rx`, averaged over Eve's basis choice and outcome.
ChannelProbabilities transmit_probabilities(Symbol sent, Basis rx, const EveStrategy& eve,
                                            const PhysicsCache& physics);

// Security check -----------------------------------------------------------------------------

enum class Verdict { pass, abort, warning };
std::string_view to_string(Verdict v);

struct SecurityThresholds {
  double z_crit = 3.0;
  double expected_r = 0.5;    // "1"-rate when the receiver's basis matched
  double expected_nr = 0.25;  // "1"-rate when it did not
};

struct CheckReport {
  std::size_t r_count = 0;
  std::size_t r_ones = 0;
  std::size_t nr_count = 0;
  std::size_t nr_ones = 0;
  double z_r = 0.0;
  double z_nr = 0.0;
  Verdict verdict = Verdict::warning;

  double r_rate() const { return r_count ? static_cast<double>(r_ones) / static_cast<double>(r_count) : 0.0; }
  double nr_rate() const { return nr_count ? static_cast<double>(nr_ones) / static_cast<double>(nr_count) : 0.0; }
};

/// Two-sided binomial z-test per class. Abort if any populated class has
/// |z| > z_crit; warning if a class is empty and nothing aborts; pass otherwise.
/// Fills z_r, z_nr and verdict in place and returns the verdict.
Verdict decide_security(CheckReport& report, const SecurityThresholds& thresholds);

// Session -------------------------------------------------------------------------------------

struct ProtocolConfig {
  std::size_t n_channels = 10000;
  std::size_t m_check = 2000;
  std::vector<int> payload;  // bit for channel i; channels past the end carry random bits
  std::uint64_t seed = 42;
  EveStrategy eve{};
  SecurityThresholds thresholds{};
  double sender_delay = 3.0;        // time the second bin stays in the sender's fiber
  double classical_latency = 0.1;   // public discussion time after the mid check

  /// Throws std::invalid_argument naming the violated constraint.
  void validate(const CavityParams& params) const;
};

struct ChannelRecord {
  std::size_t index = 0;
  int bit_sent = 0;
  Symbol symbol = Symbol::alpha;
  Basis rx_basis = Basis::A;
  bool match = false;  // type r
  bool checked = false;
  std::optional<int> mid_outcome;
  bool aborted = false;
  std::optional<int> final_outcome;
  std::optional<int> decoded;
  EveAction eve{};
};

struct SessionResult {
  std::vector<ChannelRecord> transcript;
  CheckReport check;
  double check_done_time = 0.0;      // t_r
  double second_bin_release = 0.0;   // when second bins leave the sender's control
  std::size_t delivered_second_bins = 0;
  bool empty_check_warning = false;

  /// Decoded bits of surviving channels in channel order.
  std::vector<int> decoded_bits() const;
};

SessionResult run_session(const ProtocolConfig& config, const PhysicsCache& physics);

/// `channel,bit_sent,symbol,rx_basis,match,checked,mid_outcome,aborted,final_outcome,decoded`;
/// absent outcomes are written as `-`.
std::string transcript_to_csv(const std::vector<ChannelRecord>& transcript);

/// Keys `r_count,r_ones,nr_count,nr_ones,z_r,z_nr,verdict`.
std::string check_report_to_json(const CheckReport& report);

}  // namespace pulseqsdc::protocol
