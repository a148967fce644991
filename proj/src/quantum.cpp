#include "secdist/quantum.hpp"

#include "secdist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace secdist::quantum {

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::mul(const CMatrix& rhs) const {
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const cplx aik = at(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < dim_; ++j) out.at(i, j) += aik * rhs.at(k, j);
    }
  }
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out.at(i, j) = std::conj(at(j, i));
  }
  return out;
}

cplx CMatrix::trace() const {
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

double CMatrix::max_abs_diff(const CMatrix& rhs) const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) m = std::max(m, std::abs(at(i, j) - rhs.at(i, j)));
  }
  return m;
}

void CMatrix::add_outer(const std::vector<cplx>& v, double weight) {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) a_[i * dim_ + j] += weight * v[i] * std::conj(v[j]);
  }
}

std::vector<double> hermitian_eigenvalues(CMatrix h) {
  const std::size_t n = h.dim();
  auto offdiag_norm = [&]() {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) s += std::norm(h.at(p, q));
    }
    return std::sqrt(2.0 * s);
  };

  for (int sweep = 0; sweep < 100 && offdiag_norm() > 1e-14; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = h.at(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const cplx phase = apq / mag;
        const double app = h.at(p, p).real();
        const double aqq = h.at(q, q).real();
        const double theta = (app - aqq) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sigma = t * c;
        // Unitary J: J[p][p]=c, J[p][q]=-sigma*phase, J[q][p]=sigma*conj(phase), J[q][q]=c.
        const cplx jpq = -sigma * phase;
        const cplx jqp = sigma * std::conj(phase);
        // Columns: col_p' = c*col_p + jqp*col_q ; col_q' = jpq*col_p + c*col_q (right-multiply by J)
        for (std::size_t i = 0; i < n; ++i) {
          const cplx hip = h.at(i, p);
          const cplx hiq = h.at(i, q);
          h.at(i, p) = c * hip + jqp * hiq;
          h.at(i, q) = jpq * hip + c * hiq;
        }
        // Rows (left-multiply by J^dagger).
        for (std::size_t j = 0; j < n; ++j) {
          const cplx hpj = h.at(p, j);
          const cplx hqj = h.at(q, j);
          h.at(p, j) = c * hpj + std::conj(jqp) * hqj;
          h.at(q, j) = std::conj(jpq) * hpj + c * hqj;
        }
        h.at(p, q) = cplx{0.0, 0.0};
        h.at(q, p) = cplx{0.0, 0.0};
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = h.at(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

DensityMatrix DensityMatrix::make(std::vector<std::string> labels, CMatrix m,
                                  double psd_tolerance) {
  const std::size_t dim = std::size_t{1} << labels.size();
  if (m.dim() != dim) {
    fail(Errc::wrong_dimension, "matrix dimension " + std::to_string(m.dim()) +
                                    " does not match " + std::to_string(labels.size()) +
                                    " qubits");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > 1e-12) {
        fail(Errc::internal_check_failed, "matrix is not Hermitian");
      }
    }
  }
  if (std::abs(m.trace() - cplx{1.0, 0.0}) > 1e-12) {
    fail(Errc::internal_check_failed, "trace is not 1");
  }
  const auto eig = hermitian_eigenvalues(m);
  if (!eig.empty() && eig.front() < -psd_tolerance) {
    fail(Errc::internal_check_failed,
         "matrix has eigenvalue " + std::to_string(eig.front()));
  }
  DensityMatrix d;
  d.labels = std::move(labels);
  d.mat = std::move(m);
  d.tolerance = psd_tolerance;
  return d;
}

std::size_t DensityMatrix::qubit_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  fail(Errc::unknown_qubit, "no qubit labeled '" + std::string(label) + "'");
}

namespace {

std::vector<cplx> tensor(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

std::vector<cplx> phase_ket(int k) {
  // (|0> + e^{i pi k / 2} |1>) / sqrt 2
  const double angle = std::numbers::pi * k / 2.0;
  const double r = 1.0 / std::sqrt(2.0);
  return {cplx{r, 0.0}, cplx{r * std::cos(angle), r * std::sin(angle)}};
}

} // namespace

DensityMatrix build_paper_state(PaperState which) {
  CMatrix m(8);
  switch (which) {
    case PaperState::rho_initial: {
      const std::vector<cplx> ket0{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
      const std::vector<cplx> ket1{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
      for (int k = 0; k < 4; ++k) {
        const auto v = tensor(tensor(phase_ket(k), phase_ket(-k)), ket0);
        m.add_outer(v, 1.0 / 6.0);
      }
      for (int i = 0; i < 2; ++i) {
        const auto v = tensor(tensor(i ? ket1 : ket0, i ? ket1 : ket0), ket1);
        m.add_outer(v, 1.0 / 6.0);
      }
      break;
    }
    case PaperState::sigma_mid: {
      const double r = 1.0 / std::sqrt(2.0);
      std::vector<cplx> ghz(8, cplx{0.0, 0.0});
      ghz[0] = r;  // |000>
      ghz[7] = r;  // |111>
      m.add_outer(ghz, 1.0 / 3.0);
      for (std::size_t idx : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{6}}) {
        m.at(idx, idx) += 1.0 / 6.0; // |001>,|010>,|101>,|110>
      }
      break;
    }
    case PaperState::tau_final: {
      const double r = 1.0 / std::sqrt(2.0);
      std::vector<cplx> phi(8, cplx{0.0, 0.0});
      phi[0] = r;  // |000> : Phi+ on AB, C = 0
      phi[6] = r;  // |110>
      m.add_outer(phi, 1.0 / 3.0);
      for (std::size_t idx : {std::size_t{1}, std::size_t{3}, std::size_t{5}, std::size_t{7}}) {
        m.at(idx, idx) += 1.0 / 6.0; // (2/3) * (I_AB / 4) on C = 1
      }
      break;
    }
  }
  return DensityMatrix::make({"A", "B", "C"}, std::move(m));
}

DensityMatrix apply_cnot(const DensityMatrix& state, const std::string& control,
                         const std::string& target) {
  const std::size_t ci = state.qubit_index(control);
  const std::size_t ti = state.qubit_index(target);
  if (ci == ti) fail(Errc::same_qubit, "control equals target");
  const std::size_t n = state.num_qubits();
  const std::size_t cbit = n - 1 - ci; // first label = most significant bit
  const std::size_t tbit = n - 1 - ti;

  const std::size_t dim = state.dim();
  std::vector<std::size_t> perm(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    perm[i] = (i >> cbit) & 1 ? i ^ (std::size_t{1} << tbit) : i;
  }
  CMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out.at(perm[i], perm[j]) = state.mat.at(i, j);
  }
  return DensityMatrix::make(state.labels, std::move(out), state.tolerance);
}

CMatrix partial_transpose(const CMatrix& m, std::size_t nqubits, std::uint32_t mask) {
  const std::size_t dim = std::size_t{1} << nqubits;
  CMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const std::size_t ti = (i & ~std::size_t{mask}) | (j & mask);
      const std::size_t tj = (j & ~std::size_t{mask}) | (i & mask);
      out.at(ti, tj) = m.at(i, j);
    }
  }
  return out;
}

double partial_transpose_min_eigenvalue(const DensityMatrix& state,
                                        const std::vector<std::string>& subsystem) {
  if (subsystem.empty() || subsystem.size() >= state.num_qubits()) {
    fail(Errc::empty_or_full_subsystem,
         "subsystem must be a non-empty proper subset of the qubits");
  }
  std::uint32_t mask = 0;
  for (const auto& label : subsystem) {
    const std::size_t bit = state.num_qubits() - 1 - state.qubit_index(label);
    mask |= std::uint32_t{1} << bit;
  }
  const CMatrix pt = partial_transpose(state.mat, state.num_qubits(), mask);
  return hermitian_eigenvalues(pt).front();
}

std::vector<MeasurementOutcome> measure_computational(const DensityMatrix& state,
                                                      const std::string& qubit) {
  const std::size_t qi = state.qubit_index(qubit);
  const std::size_t bit = state.num_qubits() - 1 - qi;
  const std::size_t dim = state.dim();
  const std::size_t sub_dim = dim >> 1;

  std::vector<std::string> rest_labels;
  for (std::size_t i = 0; i < state.labels.size(); ++i) {
    if (i != qi) rest_labels.push_back(state.labels[i]);
  }

  // Embeds a (n-1)-qubit index into the full space with the measured bit set
  // to `outcome`.
  auto embed = [&](std::size_t r, std::size_t outcome) {
    const std::size_t high = r >> bit;
    const std::size_t low = r & ((std::size_t{1} << bit) - 1);
    return (high << (bit + 1)) | (outcome << bit) | low;
  };

  std::vector<MeasurementOutcome> outcomes;
  for (std::size_t o = 0; o < 2; ++o) {
    double p = 0.0;
    for (std::size_t r = 0; r < sub_dim; ++r) p += state.mat.at(embed(r, o), embed(r, o)).real();
    if (p < 1e-14) continue;
    CMatrix block(sub_dim);
    for (std::size_t r = 0; r < sub_dim; ++r) {
      for (std::size_t c = 0; c < sub_dim; ++c) {
        block.at(r, c) = state.mat.at(embed(r, o), embed(c, o)) / p;
      }
    }
    MeasurementOutcome res;
    res.outcome = static_cast<int>(o);
    res.probability = p;
    res.post_state = DensityMatrix::make(rest_labels, std::move(block), state.tolerance);
    outcomes.push_back(std::move(res));
  }
  return outcomes;
}

double fidelity_with_phi_plus(const DensityMatrix& state) {
  if (state.num_qubits() != 2) {
    fail(Errc::wrong_dimension, "fidelity with Phi+ needs a two-qubit state");
  }
  const cplx f = 0.5 * (state.mat.at(0, 0) + state.mat.at(0, 3) + state.mat.at(3, 0) +
                        state.mat.at(3, 3));
  return f.real();
}

std::map<std::string, Party> default_owner_map() {
  return {{"A", Party::alice}, {"B", Party::bob}, {"C", Party::alice}};
}

namespace {

// Best rational approximation via continued fractions, denominator <= max_den.
std::optional<Rational> rationalize(double x, BigInt max_den, double tol) {
  if (x < 0.0 && x > -tol) x = 0.0;
  if (x < 0.0) return std::nullopt;
  double v = x;
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(v);
    if (fl > 1e15) break;
    BigInt a = static_cast<long long>(fl);
    BigInt p2 = a * p1 + p0;
    BigInt q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const Rational cand(p1, q1);
    if (std::abs(to_double(cand) - x) <= tol) return cand;
    const double rem = v - fl;
    if (rem < 1e-15) break;
    v = 1.0 / rem;
  }
  return std::nullopt;
}

} // namespace

ComputationalDistribution computational_distribution(
    const DensityMatrix& state, const std::map<std::string, Party>& owners) {
  ComputationalDistribution out;
  const std::size_t dim = state.dim();
  out.diagonal.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) out.diagonal[i] = state.mat.at(i, i).real();

  std::vector<Rational> probs(dim);
  bool ok = true;
  Rational sum = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    auto r = rationalize(out.diagonal[i], BigInt(1000000), 1e-12);
    if (!r) {
      ok = false;
      break;
    }
    probs[i] = *r;
    sum += *r;
  }
  out.exact = ok && sum == 1;
  if (!out.exact) return out;

  std::vector<VariableDef> vars;
  for (const auto& label : state.labels) {
    auto it = owners.find(label);
    vars.push_back({label, {"0", "1"}, it == owners.end() ? Party::eve : it->second});
  }
  std::vector<DistEntry> entries;
  for (std::size_t i = 0; i < dim; ++i) {
    if (probs[i] == 0) continue;
    SymbolTuple outcome(state.labels.size());
    for (std::size_t q = 0; q < state.labels.size(); ++q) {
      const std::size_t bit = state.labels.size() - 1 - q;
      outcome[q] = ((i >> bit) & 1) ? "1" : "0";
    }
    entries.push_back({outcome, probs[i]});
  }
  out.dist = JointDistribution::build(std::move(vars), entries);
  return out;
}

} // namespace secdist::quantum
