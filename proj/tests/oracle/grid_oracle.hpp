#pragma once

#include "secdist/dist.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gridoracle {

// Brute-force reference for the intrinsic-information search: the exact
// minimum of I(x : y | E~) over every channel whose entries lie on a
// 1/steps lattice, with |E~| = |E|. The evaluation is self-contained so it
// stays independent of the optimizer it is used to check.
struct Problem {
  std::size_t nx = 0, ny = 0, ne = 0;
  std::vector<double> pxye; // [(u*ny + v)*ne + e]
};

Problem problem_from(const secdist::JointDistribution& d, const std::vector<std::string>& x,
                     const std::vector<std::string>& y, const std::string& eve);

// Exact lattice minimum for ne <= 3 (branch-and-bound over output columns;
// prunes are admissible, so the result equals full enumeration).
double lattice_min_cmi(const Problem& p, int steps);

// Plain full enumeration over per-input row splits. Exponential; only usable
// for coarse lattices. Used to validate the pruned search.
double lattice_min_cmi_unpruned(const Problem& p, int steps);

} // namespace gridoracle
