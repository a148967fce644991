#include "secdist/intrinsic.hpp"

#include "secdist/errors.hpp"
#include "secdist/info.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace secdist {

namespace {

constexpr double kTinyLog = 1e-300;

double safe_log2(double x) { return std::log2(x < kTinyLog ? kTinyLog : x); }

// Channel-matrix tie-break: lexicographically smallest row-major matrix wins
// among equal objective values.
bool rows_lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool map_rows_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  // A deterministic row with its 1 at a later column is lexicographically
  // smaller, so larger digits compare as smaller rows.
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

bool scored_less(const ScoredMap& a, const ScoredMap& b) {
  if (a.value != b.value) return a.value < b.value;
  return map_rows_less(a.map, b.map);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d649bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

double CollapsedJoint::objective(const double* rows, std::size_t nout, Workspace& ws) const {
  ws.jxy.assign(nx * ny, 0.0);
  ws.jx.assign(nx, 0.0);
  ws.jy.assign(ny, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < nout; ++k) {
    double w = 0.0;
    std::fill(ws.jx.begin(), ws.jx.end(), 0.0);
    std::fill(ws.jy.begin(), ws.jy.end(), 0.0);
    for (std::size_t u = 0; u < nx; ++u) {
      for (std::size_t v = 0; v < ny; ++v) {
        const double* cell = &pxye[(u * ny + v) * ne];
        double s = 0.0;
        for (std::size_t e = 0; e < ne; ++e) s += cell[e] * rows[e * nout + k];
        ws.jxy[u * ny + v] = s;
        ws.jx[u] += s;
        ws.jy[v] += s;
        w += s;
      }
    }
    if (w <= 0.0) continue;
    for (std::size_t u = 0; u < nx; ++u) {
      for (std::size_t v = 0; v < ny; ++v) {
        const double p = ws.jxy[u * ny + v];
        if (p <= 0.0) continue;
        total += p * std::log2(p * w / (ws.jx[u] * ws.jy[v]));
      }
    }
  }
  return total;
}

double CollapsedJoint::objective(const std::vector<double>& rows, std::size_t nout) const {
  Workspace ws;
  return objective(rows.data(), nout, ws);
}

double CollapsedJoint::objective_of_map(const std::vector<std::size_t>& map, std::size_t nout,
                                        Workspace& ws) const {
  ws.jxy.assign(nx * ny * nout, 0.0);
  for (std::size_t u = 0; u < nx; ++u) {
    for (std::size_t v = 0; v < ny; ++v) {
      const double* cell = &pxye[(u * ny + v) * ne];
      double* slot = &ws.jxy[(u * ny + v) * nout];
      for (std::size_t e = 0; e < ne; ++e) slot[map[e]] += cell[e];
    }
  }
  double total = 0.0;
  ws.jx.assign(nx, 0.0);
  ws.jy.assign(ny, 0.0);
  for (std::size_t k = 0; k < nout; ++k) {
    double w = 0.0;
    std::fill(ws.jx.begin(), ws.jx.end(), 0.0);
    std::fill(ws.jy.begin(), ws.jy.end(), 0.0);
    for (std::size_t u = 0; u < nx; ++u) {
      for (std::size_t v = 0; v < ny; ++v) {
        const double p = ws.jxy[(u * ny + v) * nout + k];
        ws.jx[u] += p;
        ws.jy[v] += p;
        w += p;
      }
    }
    if (w <= 0.0) continue;
    for (std::size_t u = 0; u < nx; ++u) {
      for (std::size_t v = 0; v < ny; ++v) {
        const double p = ws.jxy[(u * ny + v) * nout + k];
        if (p <= 0.0) continue;
        total += p * std::log2(p * w / (ws.jx[u] * ws.jy[v]));
      }
    }
  }
  return total;
}

void CollapsedJoint::gradient_row(const double* rows, std::size_t nout, std::size_t e,
                                  double* grad, Workspace& ws) const {
  // obj = sum_k [ sum_uv J ln J + W ln W - sum_u A ln A - sum_v B ln B ] / ln 2
  // with J, W, A, B linear in the channel; the (x ln x)' = ln x + 1 offsets
  // cancel because the coefficient sums per (e, k) are all pe[e].
  ws.jxy.assign(nx * ny * nout, 0.0);
  ws.jx.assign(nx * nout, 0.0);
  ws.jy.assign(ny * nout, 0.0);
  ws.w.assign(nout, 0.0);
  for (std::size_t u = 0; u < nx; ++u) {
    for (std::size_t v = 0; v < ny; ++v) {
      const double* cell = &pxye[(u * ny + v) * ne];
      for (std::size_t k = 0; k < nout; ++k) {
        double s = 0.0;
        for (std::size_t ee = 0; ee < ne; ++ee) s += cell[ee] * rows[ee * nout + k];
        ws.jxy[(u * ny + v) * nout + k] = s;
        ws.jx[u * nout + k] += s;
        ws.jy[v * nout + k] += s;
        ws.w[k] += s;
      }
    }
  }
  for (std::size_t k = 0; k < nout; ++k) {
    double g = pe[e] * safe_log2(ws.w[k]);
    for (std::size_t u = 0; u < nx; ++u) {
      for (std::size_t v = 0; v < ny; ++v) {
        const double coeff = pxye[(u * ny + v) * ne + e];
        if (coeff > 0.0) g += coeff * safe_log2(ws.jxy[(u * ny + v) * nout + k]);
      }
    }
    for (std::size_t u = 0; u < nx; ++u) {
      const double coeff = pxe[u * ne + e];
      if (coeff > 0.0) g -= coeff * safe_log2(ws.jx[u * nout + k]);
    }
    for (std::size_t v = 0; v < ny; ++v) {
      const double coeff = pye[v * ne + e];
      if (coeff > 0.0) g -= coeff * safe_log2(ws.jy[v * nout + k]);
    }
    grad[k] = g;
  }
}

CollapsedJoint collapse_joint(const JointDistribution& d, const std::vector<std::string>& x,
                              const std::vector<std::string>& y, const std::string& eve) {
  std::vector<std::string> keep = x;
  keep.insert(keep.end(), y.begin(), y.end());
  keep.push_back(eve);
  const JointDistribution m = d.marginal(keep);

  std::vector<std::size_t> xi, yi;
  for (const auto& n : x) xi.push_back(m.var_index(n));
  for (const auto& n : y) yi.push_back(m.var_index(n));
  const std::size_t ei = m.var_index(eve);

  CollapsedJoint out;
  out.nx = 1;
  out.ny = 1;
  for (auto i : xi) out.nx *= m.variables()[i].alphabet.size();
  for (auto i : yi) out.ny *= m.variables()[i].alphabet.size();
  out.ne = m.variables()[ei].alphabet.size();

  // Exact accumulation first, one float conversion at the end.
  std::vector<Rational> acc(out.nx * out.ny * out.ne, Rational(0));
  std::vector<std::size_t> digits;
  for (std::size_t flat = 0; flat < m.table_size(); ++flat) {
    if (m.prob(flat) == 0) continue;
    m.decode(flat, digits);
    std::size_t u = 0, v = 0;
    for (auto i : xi) u = u * m.variables()[i].alphabet.size() + digits[i];
    for (auto i : yi) v = v * m.variables()[i].alphabet.size() + digits[i];
    acc[(u * out.ny + v) * out.ne + digits[ei]] += m.prob(flat);
  }
  out.pxye.assign(acc.size(), 0.0);
  out.pxe.assign(out.nx * out.ne, 0.0);
  out.pye.assign(out.ny * out.ne, 0.0);
  out.pe.assign(out.ne, 0.0);
  for (std::size_t u = 0; u < out.nx; ++u) {
    for (std::size_t v = 0; v < out.ny; ++v) {
      for (std::size_t e = 0; e < out.ne; ++e) {
        const double p = to_double(acc[(u * out.ny + v) * out.ne + e]);
        out.pxye[(u * out.ny + v) * out.ne + e] = p;
        out.pxe[u * out.ne + e] += p;
        out.pye[v * out.ne + e] += p;
        out.pe[e] += p;
      }
    }
  }
  return out;
}

namespace {

void decode_map(std::size_t code, std::size_t ne, std::size_t nout,
                std::vector<std::size_t>& map) {
  map.resize(ne);
  for (std::size_t i = ne; i-- > 0;) {
    map[i] = code % nout;
    code /= nout;
  }
}

void insert_scored(std::vector<ScoredMap>& top, std::size_t keep, ScoredMap cand) {
  auto pos = std::lower_bound(top.begin(), top.end(), cand, scored_less);
  top.insert(pos, std::move(cand));
  if (top.size() > keep) top.pop_back();
}

std::vector<ScoredMap> enumerate_chunk(const CollapsedJoint& joint, std::size_t nout,
                                       std::size_t keep, std::size_t begin, std::size_t end) {
  std::vector<ScoredMap> top;
  CollapsedJoint::Workspace ws;
  std::vector<std::size_t> map;
  for (std::size_t code = begin; code < end; ++code) {
    decode_map(code, joint.ne, nout, map);
    const double value = joint.objective_of_map(map, nout, ws);
    if (top.size() < keep || value < top.back().value ||
        (value == top.back().value && map_rows_less(map, top.back().map))) {
      insert_scored(top, keep, ScoredMap{value, map});
    }
  }
  return top;
}

} // namespace

std::vector<ScoredMap> enumerate_deterministic_maps(const CollapsedJoint& joint,
                                                    std::size_t nout, std::size_t keep,
                                                    ExecMode mode) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < joint.ne; ++i) total *= nout;
  if (keep == 0) keep = 1;

  std::vector<std::vector<ScoredMap>> partials;
  if (mode == ExecMode::openmp) {
#ifdef _OPENMP
    const int threads = omp_get_max_threads();
    const std::size_t chunk = (total + threads - 1) / threads;
    partials.resize(threads);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin < end) partials[t] = enumerate_chunk(joint, nout, keep, begin, end);
    }
#else
    partials.push_back(enumerate_chunk(joint, nout, keep, 0, total));
#endif
  } else {
    partials.push_back(enumerate_chunk(joint, nout, keep, 0, total));
  }

  std::vector<ScoredMap> merged;
  for (auto& part : partials) {
    for (auto& sm : part) merged.push_back(std::move(sm));
  }
  std::sort(merged.begin(), merged.end(), scored_less);
  if (merged.size() > keep) merged.resize(keep);
  return merged;
}

void project_to_simplex(std::vector<double>& v) {
  // Sort-based Euclidean projection.
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    running += u[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) {
      theta = candidate;
      count = j + 1;
    }
  }
  (void)count;
  for (auto& x : v) x = std::max(x - theta, 0.0);
  // Exact renormalization guard against rounding drift.
  double s = 0.0;
  for (double x : v) s += x;
  if (s > 0.0) {
    for (auto& x : v) x /= s;
  } else {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
  }
}

DescentResult coordinate_descent(const CollapsedJoint& joint, std::size_t nout,
                                 std::vector<double> rows, double tolerance,
                                 int max_sweeps) {
  CollapsedJoint::Workspace ws;
  double obj = joint.objective(rows.data(), nout, ws);
  bool converged = false;
  std::vector<double> grad(nout), trial_row(nout), saved_row(nout);
  std::vector<double> trial = rows;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double sweep_start = obj;
    for (std::size_t e = 0; e < joint.ne; ++e) {
      joint.gradient_row(rows.data(), nout, e, grad.data(), ws);
      double scale = 0.0;
      for (std::size_t k = 0; k < nout; ++k) scale = std::max(scale, std::abs(grad[k]));
      if (scale == 0.0) continue;
      double t = 1.0 / scale;
      bool accepted = false;
      for (int half = 0; half < 45 && !accepted; ++half) {
        for (std::size_t k = 0; k < nout; ++k) {
          trial_row[k] = rows[e * nout + k] - t * grad[k];
        }
        project_to_simplex(trial_row);
        std::copy(trial_row.begin(), trial_row.end(), trial.begin() + e * nout);
        const double cand = joint.objective(trial.data(), nout, ws);
        if (cand < obj - 1e-15) {
          std::copy(trial_row.begin(), trial_row.end(), rows.begin() + e * nout);
          obj = cand;
          accepted = true;
        } else {
          t *= 0.5;
        }
      }
      if (!accepted) {
        // restore trial buffer to the current point
        std::copy(rows.begin() + e * nout, rows.begin() + (e + 1) * nout,
                  trial.begin() + e * nout);
      }
    }
    if (sweep_start - obj < tolerance) {
      converged = true;
      break;
    }
  }
  return DescentResult{obj, std::move(rows), converged};
}

std::vector<double> materialize_rows(const std::vector<std::size_t>& map, std::size_t nout) {
  std::vector<double> rows(map.size() * nout, 0.0);
  for (std::size_t e = 0; e < map.size(); ++e) rows[e * nout + map[e]] = 1.0;
  return rows;
}

std::uint64_t restart_seed(std::uint64_t master_seed, std::uint64_t restart_index) {
  return splitmix64(master_seed ^ splitmix64(restart_index + 1));
}

std::vector<double> random_interior_rows(std::size_t ne, std::size_t nout,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> rows(ne * nout);
  for (std::size_t e = 0; e < ne; ++e) {
    double sum = 0.0;
    for (std::size_t k = 0; k < nout; ++k) {
      double g = -std::log(1.0 - unif(rng));
      rows[e * nout + k] = g;
      sum += g;
    }
    for (std::size_t k = 0; k < nout; ++k) rows[e * nout + k] /= sum;
  }
  return rows;
}

namespace {

struct Candidate {
  double value = 0.0;
  std::vector<double> rows;
  bool converged = false;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return rows_lex_less(a.rows, b.rows);
}

std::optional<std::vector<std::size_t>> snap_to_deterministic(
    const std::vector<double>& rows, std::size_t ne, std::size_t nout) {
  std::vector<std::size_t> map(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    std::size_t ones = 0;
    for (std::size_t k = 0; k < nout; ++k) {
      const double v = rows[e * nout + k];
      if (std::abs(v - 1.0) <= 1e-6) {
        map[e] = k;
        ++ones;
      } else if (std::abs(v) > 1e-6) {
        return std::nullopt;
      }
    }
    if (ones != 1) return std::nullopt;
  }
  return map;
}

} // namespace

IntrinsicResult intrinsic_information_upper_bound(const JointDistribution& d,
                                                  const std::vector<std::string>& x,
                                                  const std::vector<std::string>& y,
                                                  const std::string& eve,
                                                  const OptimizerConfig& config) {
  InfoQuery q{x, y, {eve}};
  q.validate(d);
  if (x.empty() || y.empty()) fail(Errc::empty_selection, "empty group");
  const std::size_t ei = d.var_index(eve);
  const auto& eve_alphabet = d.variables()[ei].alphabet;
  if (eve_alphabet.size() > 8) {
    fail(Errc::alphabet_too_large,
         "search budget covers alphabets up to 8 symbols, got " +
             std::to_string(eve_alphabet.size()));
  }
  if (config.restarts < 0 || config.tolerance <= 0.0 || config.max_sweeps < 1 ||
      config.descent_seeds < 1) {
    fail(Errc::invalid_config, "restarts >= 0, tolerance > 0, max_sweeps >= 1, "
                               "descent_seeds >= 1 required");
  }

  const CollapsedJoint joint = collapse_joint(d, x, y, eve);
  const std::size_t nout = joint.ne;

  const auto top = enumerate_deterministic_maps(
      joint, nout, static_cast<std::size_t>(config.descent_seeds), config.mode);

  // Task list: descents from the best deterministic maps, then from the
  // seeded random interior starts. Each task is self-contained, so the
  // parallel reduction is order-independent.
  const std::size_t n_tasks = top.size() + static_cast<std::size_t>(config.restarts);
  std::vector<Candidate> results(n_tasks);
  auto run_task = [&](std::size_t t) {
    std::vector<double> start =
        t < top.size()
            ? materialize_rows(top[t].map, nout)
            : random_interior_rows(joint.ne, nout,
                                   restart_seed(config.seed, t - top.size()));
    DescentResult r = coordinate_descent(joint, nout, std::move(start),
                                         config.tolerance, config.max_sweeps);
    results[t] = Candidate{r.value, std::move(r.rows), r.converged};
  };
  if (config.mode == ExecMode::openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < static_cast<long>(n_tasks); ++t) run_task(t);
#else
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
#endif
  } else {
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
  }

  // The undescended best deterministic map stays in the pool: descent can
  // only improve, but keeping it makes the tie-break reproducible even if a
  // descent wanders sideways at equal value.
  Candidate best{top[0].value, materialize_rows(top[0].map, nout), true};
  for (const auto& c : results) {
    if (candidate_less(c, best)) best = c;
  }

  if (best.value < -1e-12) {
    fail(Errc::internal_check_failed,
         "objective evaluated to " + std::to_string(best.value));
  }

  IntrinsicResult out;
  out.restarts_used = config.restarts;
  out.converged = best.converged;

  // Zero certification: snap near-deterministic channels to exact 0/1 rows
  // and test exact conditional independence. Only exact independence may
  // report a certified zero.
  std::vector<std::vector<std::size_t>> snap_candidates;
  if (auto m = snap_to_deterministic(best.rows, joint.ne, nout)) {
    snap_candidates.push_back(*m);
  }
  if (snap_candidates.empty() || snap_candidates[0] != top[0].map) {
    snap_candidates.push_back(top[0].map);
  }
  for (const auto& map : snap_candidates) {
    Channel exact = Channel::deterministic(eve_alphabet, eve_alphabet, map);
    const JointDistribution mapped = apply_channel(d, eve, exact);
    if (certify_zero_cmi(mapped, x, y, {eve + "_tilde"})) {
      out.value = 0.0;
      out.channel = std::move(exact);
      out.certified_zero = true;
      return out;
    }
  }

  out.value = std::max(best.value, 0.0);
  std::vector<std::vector<double>> row_vectors(joint.ne);
  for (std::size_t e = 0; e < joint.ne; ++e) {
    row_vectors[e].assign(best.rows.begin() + e * nout, best.rows.begin() + (e + 1) * nout);
    // The projection keeps rows normalized to ~1e-16; renormalize exactly for
    // the reported channel.
    double s = 0.0;
    for (double v : row_vectors[e]) s += v;
    for (auto& v : row_vectors[e]) v /= s;
  }
  out.channel = Channel::dense(eve_alphabet, eve_alphabet, std::move(row_vectors));
  return out;
}

} // namespace secdist
