#pragma once

#include "secdist/dist.hpp"

#include <string>
#include <vector>

namespace secdist {

// Variable grouping for the entropy-based measures: I(x : y | given).
// Groups must be pairwise disjoint; `given` may be empty.
struct InfoQuery {
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::vector<std::string> given;

  void validate(const JointDistribution& d) const;
};

// Shannon entropy in bits of the marginal over `vars` (0 log 0 = 0).
double entropy(const JointDistribution& d, const std::vector<std::string>& vars);

// H(x) + H(y) - H(x,y). Tiny negative float residue is clamped to 0;
// anything below -1e-12 signals an internal inconsistency.
double mutual_information(const JointDistribution& d, const std::vector<std::string>& x,
                          const std::vector<std::string>& y);

// H(x,given) + H(y,given) - H(x,y,given) - H(given).
double conditional_mutual_information(const JointDistribution& d,
                                      const std::vector<std::string>& x,
                                      const std::vector<std::string>& y,
                                      const std::vector<std::string>& given);

} // namespace secdist
