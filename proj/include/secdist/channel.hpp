#pragma once

#include "secdist/dist.hpp"

#include <optional>
#include <string>
#include <vector>

namespace secdist {

// Row-stochastic map from one variable's alphabet to a new alphabet.
// Witness channels carry exact rational rows; optimizer-internal channels
// carry float rows. Float mirrors of the rows are always available.
class Channel {
public:
  static Channel exact(std::vector<std::string> input, std::vector<std::string> output,
                       std::vector<std::vector<Rational>> rows);
  static Channel dense(std::vector<std::string> input, std::vector<std::string> output,
                       std::vector<std::vector<double>> rows);
  static Channel identity(const std::vector<std::string>& alphabet);
  // map[i] = output index of input symbol i
  static Channel deterministic(std::vector<std::string> input, std::vector<std::string> output,
                               const std::vector<std::size_t>& map);
  static Channel constant(std::vector<std::string> input, std::vector<std::string> output,
                          std::size_t target_output);

  const std::vector<std::string>& input_alphabet() const { return input_; }
  const std::vector<std::string>& output_alphabet() const { return output_; }
  bool is_exact() const { return exact_rows_.has_value(); }
  const std::vector<std::vector<Rational>>& exact_rows() const;
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  // True when every entry is 0 or 1 exactly.
  bool is_deterministic() const;

private:
  Channel() = default;
  std::vector<std::string> input_, output_;
  std::optional<std::vector<std::vector<Rational>>> exact_rows_;
  std::vector<std::vector<double>> rows_;
};

// Pushes `var` through an exact channel: the variable is replaced by a new
// one carrying the channel's output alphabet, P(.., o) = sum_e P(.., e) ch(o|e).
// The result is exact; float channels are rejected here (they are evaluated
// through cmi_under_channel instead).
JointDistribution apply_channel(const JointDistribution& d, const std::string& var,
                                const Channel& ch, const std::string& new_name = {});

// I(x : y | E~) where E~ is the channel output applied to `eve`.
// Exact channels go through apply_channel; float channels use the dense
// double-precision evaluator.
double cmi_under_channel(const JointDistribution& d, const std::vector<std::string>& x,
                         const std::vector<std::string>& y, const std::string& eve,
                         const Channel& ch);

// Exact conditional-independence test: true iff for every outcome g of
// `given` with P(g) > 0 and all x-outcomes u, y-outcomes v,
// P(u,v,g) * P(g) = P(u,g) * P(v,g) holds in rational arithmetic.
bool certify_zero_cmi(const JointDistribution& d, const std::vector<std::string>& x,
                      const std::vector<std::string>& y,
                      const std::vector<std::string>& given);

} // namespace secdist
