#pragma once

#include "secdist/rational.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace secdist {

enum class Party { alice, bob, eve, charlie };

const char* party_name(Party p);
Party party_from_name(std::string_view name); // throws ParseError

struct VariableDef {
  std::string name;
  std::vector<std::string> alphabet;
  Party owner = Party::alice;

  bool operator==(const VariableDef&) const = default;
};

using SymbolTuple = std::vector<std::string>;
using DistEntry = std::pair<SymbolTuple, Rational>;

// Joint probability distribution over named finite-alphabet variables with
// party ownership. The table is dense over the full product alphabet and
// exactly normalized; instances are immutable once built.
class JointDistribution {
public:
  // The empty-variable point distribution (one outcome, probability 1).
  JointDistribution() : table_{Rational(1)} {}

  static JointDistribution build(std::vector<VariableDef> vars,
                                 const std::vector<DistEntry>& entries);

  const std::vector<VariableDef>& variables() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  std::size_t table_size() const { return table_.size(); }
  const std::vector<Rational>& table() const { return table_; }
  const Rational& prob(std::size_t flat_index) const { return table_[flat_index]; }
  Rational prob_of(const SymbolTuple& outcome) const;

  std::size_t var_index(std::string_view name) const;                     // UnknownVariable
  std::size_t symbol_index(std::size_t var, std::string_view sym) const;  // UnknownSymbol

  JointDistribution marginal(const std::vector<std::string>& keep) const;
  std::pair<JointDistribution, Rational> condition(const std::string& var,
                                                   const std::string& symbol) const;
  JointDistribution apply_local_function(Party party, const std::string& target,
                                         const std::vector<std::string>& inputs,
                                         const std::map<SymbolTuple, std::string>& fn) const;
  JointDistribution apply_local_function(
      Party party, const std::string& target, const std::vector<std::string>& inputs,
      const std::function<std::string(const SymbolTuple&)>& fn) const;
  JointDistribution transfer_ownership(const std::string& var, Party from, Party to) const;

  // Replaces `var` by a new variable (name, alphabet) whose table entries are
  // given per (old outcome, new symbol index). Used by channel application;
  // callers must supply exactly normalized data.
  JointDistribution replace_variable(std::size_t var,
                                     VariableDef replacement,
                                     const std::function<Rational(std::size_t flat,
                                                                  std::size_t new_sym)>& weight) const;

  void decode(std::size_t flat, std::vector<std::size_t>& digits) const;
  std::size_t encode(const std::vector<std::size_t>& digits) const;
  SymbolTuple outcome_symbols(std::size_t flat) const;

  // Exact comparison of variables (names, alphabets) and probabilities,
  // ignoring ownership.
  bool table_equals(const JointDistribution& other) const;
  bool operator==(const JointDistribution& other) const;

private:
  void rebuild_strides();
  void check_normalized() const;

  std::vector<VariableDef> vars_;
  std::vector<Rational> table_; // dense; last variable varies fastest
  std::vector<std::size_t> strides_;
};

enum class PaperStage { initial, after_alice_cnot, final };

// The three published stages of the distribution pipeline: the initial table,
// the table after Alice's CNOT, and the final table after Bob's CNOT.
JointDistribution paper_distribution(PaperStage stage);

// Eve's alphabet used by the published tables, in canonical order.
const std::vector<std::string>& paper_eve_alphabet();

} // namespace secdist
