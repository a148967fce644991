#pragma once

#include <stdexcept>
#include <string>

namespace secdist {

enum class Errc {
  negative_probability,
  not_normalized,
  unknown_symbol,
  duplicate_outcome,
  arity_mismatch,
  unknown_variable,
  empty_selection,
  zero_probability_event,
  ownership_violation,
  partial_function,
  overlapping_groups,
  alphabet_mismatch,
  invalid_channel,
  alphabet_too_large,
  invalid_config,
  non_binary_alphabet,
  internal_check_failed,
  unknown_qubit,
  same_qubit,
  empty_or_full_subsystem,
  wrong_dimension,
  parse_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

} // namespace secdist
