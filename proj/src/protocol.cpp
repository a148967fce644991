#include "secdist/protocol.hpp"

#include "secdist/errors.hpp"
#include "secdist/info.hpp"

namespace secdist {

const char* step_kind_name(ProtocolStep::Kind kind) {
  switch (kind) {
    case ProtocolStep::Kind::local_function: return "local_function";
    case ProtocolStep::Kind::private_send: return "private_send";
    case ProtocolStep::Kind::post_select: return "post_select";
  }
  return "?";
}

bool ProtocolTrace::all_checks_passed() const {
  for (const auto& s : steps) {
    for (const auto& c : s.checks) {
      if (!c.passed) return false;
    }
  }
  for (const auto& c : final_checks) {
    if (!c.passed) return false;
  }
  return true;
}

namespace {

void require_binary(const JointDistribution& d, const std::string& var) {
  const auto& alpha = d.variables()[d.var_index(var)].alphabet;
  if (alpha != std::vector<std::string>{"0", "1"}) {
    fail(Errc::non_binary_alphabet, "variable '" + var + "' is not a {0,1} bit");
  }
}

} // namespace

JointDistribution cnot_step(const JointDistribution& d, Party party,
                            const std::string& control, const std::string& target) {
  require_binary(d, control);
  require_binary(d, target);
  return d.apply_local_function(party, target, {control, target},
                                [](const SymbolTuple& in) {
                                  return in[0] == in[1] ? std::string("0") : std::string("1");
                                });
}

JointDistribution private_send(const JointDistribution& d, const std::string& var,
                               Party from, Party to) {
  return d.transfer_ownership(var, from, to);
}

std::pair<JointDistribution, Rational> postselect(const JointDistribution& d,
                                                  const std::string& var,
                                                  const std::string& keep) {
  return d.condition(var, keep);
}

SbitVerdict is_perfect_sbit(const JointDistribution& d, const std::string& a,
                            const std::string& b, const std::vector<std::string>& eve_vars) {
  require_binary(d, a);
  require_binary(d, b);

  const JointDistribution pair = d.marginal({a, b});
  const std::size_t ai = pair.var_index(a);
  const std::size_t bi = pair.var_index(b);

  Rational p_equal = 0, p_a0 = 0;
  std::vector<std::size_t> digits;
  for (std::size_t flat = 0; flat < pair.table_size(); ++flat) {
    pair.decode(flat, digits);
    if (digits[ai] == digits[bi]) p_equal += pair.prob(flat);
    if (digits[ai] == 0) p_a0 += pair.prob(flat);
  }

  SbitVerdict v;
  v.correlation_ok = p_equal == 1;
  v.uniformity_ok = p_a0 == Rational(1, 2);
  v.eve_independent =
      eve_vars.empty() ? true : certify_zero_cmi(d, {a, b}, eve_vars, {});
  v.is_sbit = v.correlation_ok && v.uniformity_ok && v.eve_independent;
  return v;
}

Channel paper_witness_channel() {
  const auto& alphabet = paper_eve_alphabet(); // e0 e01 e10 f0 f1
  return Channel::deterministic(alphabet, alphabet, {0, 1, 2, 0, 0});
}

ProtocolTrace run_paper_protocol() {
  ProtocolTrace trace;
  trace.initial = paper_distribution(PaperStage::initial);
  trace.warnings = {
      "post-selection keeps C=0: the prose says to keep C=1, but the kept "
      "table, the stated success probability 1/3 and the quantum analog all "
      "select C=0",
      "the claim I(AC:B|E)=0 for the initial table does not hold as written: "
      "direct evaluation gives I(AC:B|E)=1/3; the intrinsic information "
      "across AC-B is still 0 via the channel merging e01 and e10 into e0",
  };

  auto check_fail = [](const std::string& name) {
    fail(Errc::internal_check_failed, "protocol check '" + name + "' failed");
  };
  auto record = [&](ProtocolStep step) -> const JointDistribution& {
    trace.steps.push_back(std::move(step));
    for (const auto& c : trace.steps.back().checks) {
      if (!c.passed) check_fail(c.name);
    }
    return trace.steps.back().after;
  };

  // Alice's CNOT on (A, C); must reproduce the mid table exactly.
  {
    ProtocolStep step;
    step.kind = ProtocolStep::Kind::local_function;
    step.party = Party::alice;
    step.target = "C";
    step.inputs = {"A", "C"};
    step.after = cnot_step(trace.initial, Party::alice, "A", "C");
    const bool exact = step.after == paper_distribution(PaperStage::after_alice_cnot);
    step.checks.push_back({"mid_table_exact", exact, std::nullopt, std::nullopt});

    // The variable sent next must carry no secret correlations with A, B:
    // the witness channel merging f0, f1 into e0 certifies I(AB:C | E~) = 0.
    const Channel witness = paper_witness_channel();
    const JointDistribution mapped = apply_channel(step.after, "E", witness);
    const bool certified = certify_zero_cmi(mapped, {"A", "B"}, {"C"}, {"E_tilde"});
    const double witness_cmi = cmi_under_channel(step.after, {"A", "B"}, {"C"}, "E", witness);
    step.checks.push_back({"witness_certifies_zero_intrinsic_AB_C", certified,
                           witness_cmi, std::nullopt});
    const double raw_cmi = conditional_mutual_information(step.after, {"A", "B"}, {"C"}, {"E"});
    step.checks.push_back({"raw_cmi_AB_C_given_E", true, raw_cmi, std::nullopt});
    trace.witness_channel = witness;
    record(std::move(step));
  }

  // C travels through the private channel.
  {
    ProtocolStep step;
    step.kind = ProtocolStep::Kind::private_send;
    step.target = "C";
    step.from = Party::alice;
    step.to = Party::bob;
    step.after = private_send(trace.steps.back().after, "C", Party::alice, Party::bob);
    record(std::move(step));
  }

  // Bob's CNOT on (B, C); must reproduce the final table exactly.
  {
    ProtocolStep step;
    step.kind = ProtocolStep::Kind::local_function;
    step.party = Party::bob;
    step.target = "C";
    step.inputs = {"B", "C"};
    step.after = cnot_step(trace.steps.back().after, Party::bob, "B", "C");
    const bool exact = step.after == paper_distribution(PaperStage::final);
    step.checks.push_back({"final_table_exact", exact, std::nullopt, std::nullopt});
    record(std::move(step));
  }

  // Public accept/reject announcement; keep C = 0.
  {
    auto [kept, p] = postselect(trace.steps.back().after, "C", "0");
    ProtocolStep step;
    step.kind = ProtocolStep::Kind::post_select;
    step.target = "C";
    step.kept_symbol = "0";
    step.event_probability = p;
    step.after = std::move(kept);
    step.checks.push_back({"success_probability_one_third", p == Rational(1, 3),
                           std::nullopt, format_rational(p)});
    trace.success_probability = p;
    record(std::move(step));
  }

  const SbitVerdict verdict =
      is_perfect_sbit(trace.steps.back().after, "A", "B", {"E"});
  trace.final_checks.push_back({"kept_distribution_is_perfect_sbit", verdict.is_sbit,
                                std::nullopt, std::nullopt});
  trace.final_checks.push_back({"sbit_correlation", verdict.correlation_ok,
                                std::nullopt, std::nullopt});
  trace.final_checks.push_back({"sbit_uniformity", verdict.uniformity_ok,
                                std::nullopt, std::nullopt});
  trace.final_checks.push_back({"sbit_eve_independent", verdict.eve_independent,
                                std::nullopt, std::nullopt});
  for (const auto& c : trace.final_checks) {
    if (!c.passed) check_fail(c.name);
  }
  return trace;
}

CourierDemo untrusted_courier_demo() {
  std::vector<VariableDef> vars{
      {"s", {"0", "1"}, Party::eve},     // public shared bit: Eve's view
      {"r", {"0", "1"}, Party::charlie}, // bit carried by the courier
      {"k_a", {"0", "1"}, Party::alice},
      {"k_b", {"0", "1"}, Party::bob},
  };
  std::vector<DistEntry> entries;
  const Rational quarter(1, 4);
  for (int s = 0; s < 2; ++s) {
    for (int r = 0; r < 2; ++r) {
      const std::string k = (s ^ r) ? "1" : "0";
      entries.push_back({{std::to_string(s), std::to_string(r), k, k}, quarter});
    }
  }
  CourierDemo demo{.key_uniform = false,
                   .eve_cmi = 0.0,
                   .charlie_cmi = 0.0,
                   .collusion_mi = 0.0,
                   .eve_independent_exact = false,
                   .charlie_independent_exact = false,
                   .distribution = JointDistribution::build(std::move(vars), entries)};

  const auto& d = demo.distribution;
  const JointDistribution key = d.marginal({"k_a"});
  const Rational p0 = key.prob_of({"0"});
  Rational keys_equal = 0;
  for (std::size_t flat = 0; flat < d.table_size(); ++flat) {
    std::vector<std::size_t> digits;
    d.decode(flat, digits);
    if (digits[d.var_index("k_a")] == digits[d.var_index("k_b")]) {
      keys_equal += d.prob(flat);
    }
  }
  demo.key_uniform = p0 == Rational(1, 2) && keys_equal == 1;
  demo.eve_cmi = mutual_information(d, {"k_a"}, {"s"});
  demo.charlie_cmi = mutual_information(d, {"k_a"}, {"r"});
  demo.collusion_mi = mutual_information(d, {"k_a"}, {"s", "r"});
  demo.eve_independent_exact = certify_zero_cmi(d, {"k_a"}, {"s"}, {});
  demo.charlie_independent_exact = certify_zero_cmi(d, {"k_a"}, {"r"}, {});
  return demo;
}

} // namespace secdist
