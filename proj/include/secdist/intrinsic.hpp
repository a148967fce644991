#pragma once

#include "secdist/channel.hpp"
#include "secdist/dist.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace secdist {

enum class ExecMode { serial, openmp };

struct OptimizerConfig {
  int restarts = 64;
  std::uint64_t seed = 0;
  double tolerance = 1e-9; // stop when a full sweep improves by less than this
  int max_sweeps = 300;
  int descent_seeds = 12;  // best deterministic maps carried into descent
  ExecMode mode = ExecMode::openmp;
};

struct IntrinsicResult {
  double value = 0.0;
  std::optional<Channel> channel; // best channel found; exact rows when certified
  bool certified_zero = false;
  int restarts_used = 0;
  bool converged = false;
};

// ---------------------------------------------------------------------------
// Evaluation kernel. The search space is the product of per-input simplices;
// the objective I(x : y | E~) is evaluated on a collapsed double-precision
// view of P(x-group, y-group, e). Channels are flat row-major arrays of
// ne * nout doubles.
// ---------------------------------------------------------------------------

struct CollapsedJoint {
  std::size_t nx = 0, ny = 0, ne = 0;
  std::vector<double> pxye; // [(u*ny + v)*ne + e]
  std::vector<double> pxe;  // [u*ne + e]
  std::vector<double> pye;  // [v*ne + e]
  std::vector<double> pe;

  struct Workspace {
    std::vector<double> jxy, jx, jy, w;
  };

  double objective(const double* rows, std::size_t nout, Workspace& ws) const;
  double objective(const std::vector<double>& rows, std::size_t nout) const;
  // Objective of a deterministic map, without materializing channel rows.
  double objective_of_map(const std::vector<std::size_t>& map, std::size_t nout,
                          Workspace& ws) const;
  // d objective / d rows[e*nout + k] at the given channel.
  void gradient_row(const double* rows, std::size_t nout, std::size_t e,
                    double* grad, Workspace& ws) const;
};

CollapsedJoint collapse_joint(const JointDistribution& d, const std::vector<std::string>& x,
                              const std::vector<std::string>& y, const std::string& eve);

struct ScoredMap {
  double value = 0.0;
  std::vector<std::size_t> map;
};

// Evaluates all nout^ne deterministic maps and returns the `keep` best,
// ordered by (value, channel-lexicographic tie-break). The OpenMP variant
// returns bit-identical results to the serial one.
std::vector<ScoredMap> enumerate_deterministic_maps(const CollapsedJoint& joint,
                                                    std::size_t nout, std::size_t keep,
                                                    ExecMode mode);

struct DescentResult {
  double value = 0.0;
  std::vector<double> rows;
  bool converged = false;
};

// Coordinate-wise projected gradient descent over the product of simplices,
// sweeping input rows cyclically with a backtracking line search.
DescentResult coordinate_descent(const CollapsedJoint& joint, std::size_t nout,
                                 std::vector<double> start_rows, double tolerance,
                                 int max_sweeps);

// Euclidean projection onto the probability simplex.
void project_to_simplex(std::vector<double>& v);

std::vector<double> materialize_rows(const std::vector<std::size_t>& map, std::size_t nout);
std::vector<double> random_interior_rows(std::size_t ne, std::size_t nout,
                                         std::uint64_t seed);
std::uint64_t restart_seed(std::uint64_t master_seed, std::uint64_t restart_index);

// ---------------------------------------------------------------------------
// Upper bound on the intrinsic information min over stochastic maps E -> E~
// of I(x : y | E~), with |E~| = |E|. The search covers all deterministic maps
// plus seeded local-descent runs; if the best channel snaps to an exact
// deterministic channel that passes certify_zero_cmi, the result is a
// certified exact zero.
// ---------------------------------------------------------------------------
IntrinsicResult intrinsic_information_upper_bound(const JointDistribution& d,
                                                  const std::vector<std::string>& x,
                                                  const std::vector<std::string>& y,
                                                  const std::string& eve,
                                                  const OptimizerConfig& config = {});

} // namespace secdist
