#include "secdist/dist.hpp"

#include "secdist/errors.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace secdist {

const char* party_name(Party p) {
  switch (p) {
    case Party::alice: return "alice";
    case Party::bob: return "bob";
    case Party::eve: return "eve";
    case Party::charlie: return "charlie";
  }
  return "?";
}

Party party_from_name(std::string_view name) {
  if (name == "alice") return Party::alice;
  if (name == "bob") return Party::bob;
  if (name == "eve") return Party::eve;
  if (name == "charlie") return Party::charlie;
  fail(Errc::parse_error, "unknown party '" + std::string(name) + "'");
}

void JointDistribution::rebuild_strides() {
  strides_.assign(vars_.size(), 1);
  for (std::size_t i = vars_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * vars_[i].alphabet.size();
  }
}

void JointDistribution::decode(std::size_t flat, std::vector<std::size_t>& digits) const {
  digits.resize(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    digits[i] = flat / strides_[i];
    flat %= strides_[i];
  }
}

std::size_t JointDistribution::encode(const std::vector<std::size_t>& digits) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) flat += digits[i] * strides_[i];
  return flat;
}

SymbolTuple JointDistribution::outcome_symbols(std::size_t flat) const {
  std::vector<std::size_t> digits;
  decode(flat, digits);
  SymbolTuple out(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) out[i] = vars_[i].alphabet[digits[i]];
  return out;
}

std::size_t JointDistribution::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  fail(Errc::unknown_variable, "no variable named '" + std::string(name) + "'");
}

std::size_t JointDistribution::symbol_index(std::size_t var, std::string_view sym) const {
  const auto& alpha = vars_[var].alphabet;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == sym) return i;
  }
  fail(Errc::unknown_symbol,
       "variable '" + vars_[var].name + "' has no symbol '" + std::string(sym) + "'");
}

void JointDistribution::check_normalized() const {
  Rational sum = 0;
  for (const auto& p : table_) {
    if (p < 0) fail(Errc::negative_probability, "probability " + format_rational(p));
    sum += p;
  }
  if (sum != 1) {
    fail(Errc::not_normalized, "probabilities sum to " + format_rational(sum));
  }
}

JointDistribution JointDistribution::build(std::vector<VariableDef> vars,
                                           const std::vector<DistEntry>& entries) {
  std::unordered_set<std::string> names;
  for (const auto& v : vars) {
    if (v.name.empty()) fail(Errc::parse_error, "empty variable name");
    if (!names.insert(v.name).second) {
      fail(Errc::parse_error, "duplicate variable name '" + v.name + "'");
    }
    if (v.alphabet.empty()) {
      fail(Errc::parse_error, "variable '" + v.name + "' has an empty alphabet");
    }
    std::unordered_set<std::string> syms(v.alphabet.begin(), v.alphabet.end());
    if (syms.size() != v.alphabet.size()) {
      fail(Errc::parse_error, "variable '" + v.name + "' has repeated symbols");
    }
  }

  JointDistribution d;
  d.vars_ = std::move(vars);
  d.rebuild_strides();
  std::size_t size = d.vars_.empty() ? 1 : d.strides_[0] * d.vars_[0].alphabet.size();
  d.table_.assign(size, Rational(0));

  std::set<std::size_t> seen;
  for (const auto& [outcome, p] : entries) {
    if (outcome.size() != d.vars_.size()) {
      fail(Errc::arity_mismatch, "outcome has " + std::to_string(outcome.size()) +
                                     " symbols, expected " + std::to_string(d.vars_.size()));
    }
    std::vector<std::size_t> digits(d.vars_.size());
    for (std::size_t i = 0; i < d.vars_.size(); ++i) {
      digits[i] = d.symbol_index(i, outcome[i]);
    }
    const std::size_t flat = d.encode(digits);
    if (!seen.insert(flat).second) {
      fail(Errc::duplicate_outcome, "outcome listed twice");
    }
    if (p < 0) fail(Errc::negative_probability, "probability " + format_rational(p));
    d.table_[flat] = p;
  }
  d.check_normalized();
  return d;
}

Rational JointDistribution::prob_of(const SymbolTuple& outcome) const {
  if (outcome.size() != vars_.size()) {
    fail(Errc::arity_mismatch, "outcome arity mismatch");
  }
  std::vector<std::size_t> digits(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) digits[i] = symbol_index(i, outcome[i]);
  return table_[encode(digits)];
}

JointDistribution JointDistribution::marginal(const std::vector<std::string>& keep) const {
  if (keep.empty()) fail(Errc::empty_selection, "marginal over no variables");
  std::set<std::size_t> keep_idx;
  for (const auto& name : keep) keep_idx.insert(var_index(name));

  JointDistribution out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (keep_idx.count(i)) out.vars_.push_back(vars_[i]);
  }
  out.rebuild_strides();
  std::size_t size = out.vars_.empty() ? 1 : out.strides_[0] * out.vars_[0].alphabet.size();
  out.table_.assign(size, Rational(0));

  std::vector<std::size_t> digits, kept;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    if (table_[flat] == 0) continue;
    decode(flat, digits);
    kept.clear();
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (keep_idx.count(i)) kept.push_back(digits[i]);
    }
    out.table_[out.encode(kept)] += table_[flat];
  }
  return out;
}

std::pair<JointDistribution, Rational> JointDistribution::condition(
    const std::string& var, const std::string& symbol) const {
  const std::size_t vi = var_index(var);
  const std::size_t si = symbol_index(vi, symbol);

  Rational event = 0;
  std::vector<std::size_t> digits;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    decode(flat, digits);
    if (digits[vi] == si) event += table_[flat];
  }
  if (event == 0) {
    fail(Errc::zero_probability_event, var + " = " + symbol + " has probability 0");
  }

  JointDistribution out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i != vi) out.vars_.push_back(vars_[i]);
  }
  out.rebuild_strides();
  std::size_t size = out.vars_.empty() ? 1 : out.strides_[0] * out.vars_[0].alphabet.size();
  out.table_.assign(size, Rational(0));

  std::vector<std::size_t> rest;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    if (table_[flat] == 0) continue;
    decode(flat, digits);
    if (digits[vi] != si) continue;
    rest.clear();
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (i != vi) rest.push_back(digits[i]);
    }
    out.table_[out.encode(rest)] += table_[flat] / event;
  }
  return {out, event};
}

JointDistribution JointDistribution::apply_local_function(
    Party party, const std::string& target, const std::vector<std::string>& inputs,
    const std::map<SymbolTuple, std::string>& fn) const {
  const std::size_t ti = var_index(target);
  if (vars_[ti].owner != party) {
    fail(Errc::ownership_violation, "target '" + target + "' is not owned by " +
                                        party_name(party));
  }
  std::vector<std::size_t> in_idx;
  for (const auto& name : inputs) {
    const std::size_t i = var_index(name);
    if (vars_[i].owner != party) {
      fail(Errc::ownership_violation, "input '" + name + "' is not owned by " +
                                          party_name(party));
    }
    in_idx.push_back(i);
  }

  // Totality check over the full product of input alphabets; outputs must be
  // symbols of the target alphabet. The output index per input tuple is cached.
  std::vector<std::size_t> in_sizes;
  std::size_t domain = 1;
  for (auto i : in_idx) {
    in_sizes.push_back(vars_[i].alphabet.size());
    domain *= vars_[i].alphabet.size();
  }
  std::vector<std::size_t> out_index(domain);
  {
    SymbolTuple tuple(in_idx.size());
    std::vector<std::size_t> digs(in_idx.size(), 0);
    for (std::size_t code = 0; code < domain; ++code) {
      std::size_t rem = code;
      for (std::size_t k = in_idx.size(); k-- > 0;) {
        digs[k] = rem % in_sizes[k];
        rem /= in_sizes[k];
        tuple[k] = vars_[in_idx[k]].alphabet[digs[k]];
      }
      auto it = fn.find(tuple);
      if (it == fn.end()) {
        fail(Errc::partial_function, "function undefined on an input tuple");
      }
      out_index[code] = symbol_index(ti, it->second);
    }
  }

  JointDistribution out;
  out.vars_ = vars_;
  out.strides_ = strides_;
  out.table_.assign(table_.size(), Rational(0));

  std::vector<std::size_t> digits;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    if (table_[flat] == 0) continue;
    decode(flat, digits);
    std::size_t code = 0;
    for (std::size_t k = 0; k < in_idx.size(); ++k) {
      code = code * in_sizes[k] + digits[in_idx[k]];
    }
    digits[ti] = out_index[code];
    out.table_[encode(digits)] += table_[flat];
  }
  return out;
}

JointDistribution JointDistribution::apply_local_function(
    Party party, const std::string& target, const std::vector<std::string>& inputs,
    const std::function<std::string(const SymbolTuple&)>& fn) const {
  std::vector<std::size_t> in_idx;
  for (const auto& name : inputs) in_idx.push_back(var_index(name));
  std::map<SymbolTuple, std::string> table_fn;
  std::vector<std::size_t> in_sizes;
  std::size_t domain = 1;
  for (auto i : in_idx) {
    in_sizes.push_back(vars_[i].alphabet.size());
    domain *= vars_[i].alphabet.size();
  }
  SymbolTuple tuple(in_idx.size());
  for (std::size_t code = 0; code < domain; ++code) {
    std::size_t rem = code;
    for (std::size_t k = in_idx.size(); k-- > 0;) {
      tuple[k] = vars_[in_idx[k]].alphabet[rem % in_sizes[k]];
      rem /= in_sizes[k];
    }
    table_fn[tuple] = fn(tuple);
  }
  return apply_local_function(party, target, inputs, table_fn);
}

JointDistribution JointDistribution::transfer_ownership(const std::string& var, Party from,
                                                        Party to) const {
  const std::size_t vi = var_index(var);
  if (vars_[vi].owner != from) {
    fail(Errc::ownership_violation,
         "variable '" + var + "' is not owned by " + party_name(from));
  }
  JointDistribution out = *this;
  out.vars_[vi].owner = to;
  return out;
}

JointDistribution JointDistribution::replace_variable(
    std::size_t var, VariableDef replacement,
    const std::function<Rational(std::size_t, std::size_t)>& weight) const {
  JointDistribution out;
  out.vars_ = vars_;
  out.vars_[var] = std::move(replacement);
  out.rebuild_strides();
  std::size_t size = out.strides_[0] * out.vars_[0].alphabet.size();
  out.table_.assign(size, Rational(0));

  const std::size_t nsym = out.vars_[var].alphabet.size();
  std::vector<std::size_t> digits;
  for (std::size_t flat = 0; flat < table_.size(); ++flat) {
    if (table_[flat] == 0) continue;
    decode(flat, digits);
    for (std::size_t s = 0; s < nsym; ++s) {
      Rational w = weight(flat, s);
      if (w == 0) continue;
      digits[var] = s;
      out.table_[out.encode(digits)] += w;
    }
  }
  out.check_normalized();
  return out;
}

bool JointDistribution::table_equals(const JointDistribution& other) const {
  if (vars_.size() != other.vars_.size()) return false;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name != other.vars_[i].name) return false;
    if (vars_[i].alphabet != other.vars_[i].alphabet) return false;
  }
  return table_ == other.table_;
}

bool JointDistribution::operator==(const JointDistribution& other) const {
  return vars_ == other.vars_ && table_ == other.table_;
}

namespace {

JointDistribution build_paper_table(const std::vector<std::array<const char*, 4>>& rows,
                                    Party owner_of_c) {
  std::vector<VariableDef> vars{
      {"A", {"0", "1"}, Party::alice},
      {"B", {"0", "1"}, Party::bob},
      {"C", {"0", "1"}, owner_of_c},
      {"E", paper_eve_alphabet(), Party::eve},
  };
  std::vector<DistEntry> entries;
  const Rational sixth(1, 6);
  for (const auto& r : rows) {
    entries.push_back({SymbolTuple{r[0], r[1], r[2], r[3]}, sixth});
  }
  return JointDistribution::build(std::move(vars), entries);
}

} // namespace

const std::vector<std::string>& paper_eve_alphabet() {
  static const std::vector<std::string> alphabet{"e0", "e01", "e10", "f0", "f1"};
  return alphabet;
}

JointDistribution paper_distribution(PaperStage stage) {
  switch (stage) {
    case PaperStage::initial:
      return build_paper_table({{{"0", "0", "0", "e0"},
                                 {"0", "1", "0", "e01"},
                                 {"1", "0", "0", "e10"},
                                 {"1", "1", "0", "e0"},
                                 {"0", "0", "1", "f0"},
                                 {"1", "1", "1", "f1"}}},
                               Party::alice);
    case PaperStage::after_alice_cnot:
      return build_paper_table({{{"0", "0", "0", "e0"},
                                 {"0", "1", "0", "e01"},
                                 {"1", "0", "1", "e10"},
                                 {"1", "1", "1", "e0"},
                                 {"0", "0", "1", "f0"},
                                 {"1", "1", "0", "f1"}}},
                               Party::alice);
    case PaperStage::final:
      return build_paper_table({{{"0", "0", "0", "e0"},
                                 {"0", "1", "1", "e01"},
                                 {"1", "0", "1", "e10"},
                                 {"1", "1", "0", "e0"},
                                 {"0", "0", "1", "f0"},
                                 {"1", "1", "1", "f1"}}},
                               Party::bob);
  }
  fail(Errc::invalid_config, "unknown paper stage");
}

} // namespace secdist
