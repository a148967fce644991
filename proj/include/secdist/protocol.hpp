#pragma once

#include "secdist/channel.hpp"
#include "secdist/dist.hpp"

#include <optional>
#include <string>
#include <vector>

namespace secdist {

struct StepCheck {
  std::string name;
  bool passed = false;
  std::optional<double> value_bits;
  std::optional<std::string> value_exact;
};

struct ProtocolStep {
  enum class Kind { local_function, private_send, post_select };
  Kind kind = Kind::local_function;
  std::optional<Party> party;               // local_function
  std::string target;                       // local_function target / sent or selected var
  std::vector<std::string> inputs;          // local_function
  std::optional<Party> from, to;            // private_send
  std::string kept_symbol;                  // post_select (publicly announced)
  std::optional<Rational> event_probability;
  JointDistribution after;
  std::vector<StepCheck> checks;
};

const char* step_kind_name(ProtocolStep::Kind kind);

struct ProtocolTrace {
  JointDistribution initial;
  std::vector<ProtocolStep> steps;
  Rational success_probability{1};
  std::optional<Channel> witness_channel;
  std::vector<StepCheck> final_checks;
  std::vector<std::string> warnings;

  bool all_checks_passed() const;
};

struct SbitVerdict {
  bool is_sbit = false;
  bool correlation_ok = false;
  bool uniformity_ok = false;
  bool eve_independent = false;
};

// target := control XOR target; both variables must be binary and owned by
// the acting party.
JointDistribution cnot_step(const JointDistribution& d, Party party,
                            const std::string& control, const std::string& target);

// Ownership transfer through the private channel; the table is unchanged.
JointDistribution private_send(const JointDistribution& d, const std::string& var,
                               Party from, Party to);

// Public accept/reject on var = keep; returns the renormalized distribution
// over the remaining variables and the exact acceptance probability.
std::pair<JointDistribution, Rational> postselect(const JointDistribution& d,
                                                  const std::string& var,
                                                  const std::string& keep);

// Exact sbit test: a and b perfectly correlated, uniform, and the pair
// jointly independent of Eve's variables.
SbitVerdict is_perfect_sbit(const JointDistribution& d, const std::string& a,
                            const std::string& b, const std::vector<std::string>& eve_vars);

// The full pipeline: initial table, Alice's CNOT (must hit the mid table),
// witness-certified zero intrinsic information across C-AB, private send,
// Bob's CNOT (must hit the final table), post-selection on C = 0, sbit check.
// Any embedded check failure throws InternalCheckFailed.
ProtocolTrace run_paper_protocol();

// The mid-table witness channel: Eve replaces f0 and f1 by e0.
Channel paper_witness_channel();

struct CourierDemo {
  bool key_uniform = false;
  double eve_cmi = 0.0;
  double charlie_cmi = 0.0;
  double collusion_mi = 0.0;
  bool eve_independent_exact = false;
  bool charlie_independent_exact = false;
  JointDistribution distribution;
};

// Untrusted-courier scenario: a public shared bit s, a fresh bit r carried by
// Charlie, keys k = s XOR r. Eve's view {s} and Charlie's view {r} are each
// exactly independent of the key; jointly they determine it.
CourierDemo untrusted_courier_demo();

} // namespace secdist
