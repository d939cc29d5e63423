#include <numeric>
#include <stdexcept>
#include <string>

#include "pulseqsdc/protocol.hpp"

namespace pulseqsdc::protocol {

namespace {

double check_done_time(const ProtocolConfig& c, const CavityParams& p) {
  return p.T + cavity::default_ramp(p) + c.classical_latency;
}

}  // namespace

void ProtocolConfig::validate(const CavityParams& params) const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("protocol config: " + what); };
  if (n_channels == 0) fail("n_channels must be positive");
  if (m_check >= n_channels) fail("m_check must be smaller than n_channels");
  if (payload.size() > n_channels) fail("payload longer than n_channels");
  for (int b : payload) {
    if (b != 0 && b != 1) fail("payload bits must be 0 or 1");
  }
  if (!(eve.intercept_probability >= 0.0 && eve.intercept_probability <= 1.0)) {
    fail("intercept_probability must lie in [0, 1]");
  }
  if (!(thresholds.z_crit > 0.0)) fail("z_crit must be positive");
  for (double p : {thresholds.expected_r, thresholds.expected_nr}) {
    if (!(p > 0.0 && p < 1.0)) fail("expected check rates must lie in (0, 1)");
  }
  if (!(classical_latency >= 0.0)) fail("classical_latency must be non-negative");
  const double t_r = check_done_time(*this, params);
  if (!(sender_delay > t_r + params.T)) {
    fail("sender_delay " + std::to_string(sender_delay) + " must exceed t_r + T = " + std::to_string(t_r + params.T));
  }
}

SessionResult run_session(const ProtocolConfig& config, const PhysicsCache& physics) {
  const CavityParams& params = physics.params();
  config.validate(params);

  SessionResult result;
  result.check_done_time = check_done_time(config, params);
  result.second_bin_release = config.sender_delay - params.T;
  result.transcript.resize(config.n_channels);

  // Steps 1-3: preparation, transit (with Eve) and the receiver's basis choice.
  for (std::size_t i = 0; i < config.n_channels; ++i) {
    ChannelRecord& c = result.transcript[i];
    c.index = i;
    StreamRng sender(config.seed, Party::sender, i);
    const Basis basis = sender.bit() ? Basis::B : Basis::A;
    const int random_bit = sender.bit() ? 1 : 0;
    c.bit_sent = i < config.payload.size() ? config.payload[i] : random_bit;
    c.symbol = encode_bit(c.bit_sent, basis);

    StreamRng eve(config.seed, Party::eve, i);
    c.eve = eve_apply(config.eve, c.symbol, eve, physics);

    StreamRng receiver(config.seed, Party::receiver, i);
    c.rx_basis = receiver.bit() ? Basis::B : Basis::A;
    c.match = c.rx_basis == basis;
  }

  // Step 4: the receiver checks m randomly chosen atoms right after the first bin.
  std::vector<std::size_t> order(config.n_channels);
  std::iota(order.begin(), order.end(), std::size_t{0});
  StreamRng picker(config.seed, Party::check, 0);
  for (std::size_t k = 0; k < config.m_check; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(picker.below(config.n_channels - k));
    std::swap(order[k], order[j]);
  }
  CheckReport& report = result.check;
  for (std::size_t k = 0; k < config.m_check; ++k) {
    ChannelRecord& c = result.transcript[order[k]];
    c.checked = true;
    StreamRng mid(config.seed, Party::receiver, c.index);
    mid.next();  // skip the basis draw
    const int outcome = measure_atom(physics.get(c.eve.forwarded, c.rx_basis).p1_mid, mid);
    c.mid_outcome = outcome;
    if (c.match) {
      ++report.r_count;
      report.r_ones += static_cast<std::size_t>(outcome);
    } else {
      ++report.nr_count;
      report.nr_ones += static_cast<std::size_t>(outcome);
    }
  }

  // Step 5: public comparison. Nothing of the second bin has left the sender yet.
  decide_security(report, config.thresholds);
  result.empty_check_warning = report.r_count == 0 || report.nr_count == 0;
  if (!(result.second_bin_release > result.check_done_time)) {
    throw std::logic_error("second bins released before the check completed");
  }

  // Step 6: abort everything, or drop checked and mismatched channels and finish the rest.
  for (ChannelRecord& c : result.transcript) {
    if (report.verdict == Verdict::abort || c.checked || !c.match) {
      c.aborted = true;
      continue;
    }
    ++result.delivered_second_bins;
    StreamRng fin(config.seed, Party::receiver, c.index);
    fin.next();
    fin.next();  // skip the basis and mid draws
    const int outcome = measure_atom(physics.get(c.eve.forwarded, c.rx_basis).p1_final, fin);
    c.final_outcome = outcome;
    c.decoded = outcome;
  }
  return result;
}

}  // namespace pulseqsdc::protocol
