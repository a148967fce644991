#pragma once

#include "secdist/dist.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace secdist::quantum {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major. Dimensions here are at most 8.
class CMatrix {
public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {}
  static CMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  cplx& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  CMatrix mul(const CMatrix& rhs) const;
  CMatrix adjoint() const;
  cplx trace() const;
  double max_abs_diff(const CMatrix& rhs) const;
  void add_outer(const std::vector<cplx>& v, double weight); // += weight * v v^dagger

  bool operator==(const CMatrix&) const = default;

private:
  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi rotations
// (off-diagonal norm threshold 1e-14, at most 100 sweeps).
std::vector<double> hermitian_eigenvalues(CMatrix h);

// Density matrix over labeled qubits; the first label is the most significant
// bit of the computational index. Construction validates Hermiticity (1e-12),
// unit trace (1e-12), and positive semidefiniteness (min eigenvalue >= -1e-10).
struct DensityMatrix {
  std::vector<std::string> labels;
  CMatrix mat;
  double tolerance = 1e-10;

  static DensityMatrix make(std::vector<std::string> labels, CMatrix m,
                            double psd_tolerance = 1e-10);
  std::size_t qubit_index(std::string_view label) const; // UnknownQubit
  std::size_t num_qubits() const { return labels.size(); }
  std::size_t dim() const { return mat.dim(); }
};

enum class PaperState { rho_initial, sigma_mid, tau_final };

// The three density matrices of the quantum pipeline: the fully separable
// initial state, the state after Alice's CNOT (GHZ/3 plus diagonal), and the
// final state (Phi+ on AB with C=0, maximally mixed AB with C=1).
DensityMatrix build_paper_state(PaperState which);

DensityMatrix apply_cnot(const DensityMatrix& state, const std::string& control,
                         const std::string& target);

// Transpose of the subsystem indicated by the qubit bit mask.
CMatrix partial_transpose(const CMatrix& m, std::size_t nqubits, std::uint32_t mask);

double partial_transpose_min_eigenvalue(const DensityMatrix& state,
                                        const std::vector<std::string>& subsystem);

struct MeasurementOutcome {
  int outcome = 0;
  double probability = 0.0;
  DensityMatrix post_state; // remaining qubits only
};

// Computational-basis measurement of one qubit; outcomes below 1e-14
// probability are omitted.
std::vector<MeasurementOutcome> measure_computational(const DensityMatrix& state,
                                                      const std::string& qubit);

// <Phi+| rho |Phi+> for a two-qubit state.
double fidelity_with_phi_plus(const DensityMatrix& state);

struct ComputationalDistribution {
  std::optional<JointDistribution> dist; // set when the diagonal rationalizes
  std::vector<double> diagonal;
  bool exact = false;
};

std::map<std::string, Party> default_owner_map();

// The diagonal of the state in the computational basis as a joint
// distribution over one binary variable per qubit. Entries are rationalized
// within 1e-12 (denominators up to 1e6); if that fails the floats are
// reported with exact=false.
ComputationalDistribution computational_distribution(
    const DensityMatrix& state,
    const std::map<std::string, Party>& owners = default_owner_map());

} // namespace secdist::quantum
