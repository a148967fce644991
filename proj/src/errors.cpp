#include "secdist/errors.hpp"

namespace secdist {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::negative_probability: return "NegativeProbability";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::unknown_symbol: return "UnknownSymbol";
    case Errc::duplicate_outcome: return "DuplicateOutcome";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::unknown_variable: return "UnknownVariable";
    case Errc::empty_selection: return "EmptySelection";
    case Errc::zero_probability_event: return "ZeroProbabilityEvent";
    case Errc::ownership_violation: return "OwnershipViolation";
    case Errc::partial_function: return "PartialFunction";
    case Errc::overlapping_groups: return "OverlappingGroups";
    case Errc::alphabet_mismatch: return "AlphabetMismatch";
    case Errc::invalid_channel: return "InvalidChannel";
    case Errc::alphabet_too_large: return "AlphabetTooLarge";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::non_binary_alphabet: return "NonBinaryAlphabet";
    case Errc::internal_check_failed: return "InternalCheckFailed";
    case Errc::unknown_qubit: return "UnknownQubit";
    case Errc::same_qubit: return "SameQubit";
    case Errc::empty_or_full_subsystem: return "EmptyOrFullSubsystem";
    case Errc::wrong_dimension: return "WrongDimension";
    case Errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

} // namespace secdist
