#include "oracle/grid_oracle.hpp"

#include "secdist/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>

namespace gridoracle {

using secdist::JointDistribution;

Problem problem_from(const JointDistribution& d, const std::vector<std::string>& x,
                     const std::vector<std::string>& y, const std::string& eve) {
  std::vector<std::string> keep = x;
  keep.insert(keep.end(), y.begin(), y.end());
  keep.push_back(eve);
  const JointDistribution m = d.marginal(keep);

  std::vector<std::size_t> xi, yi;
  for (const auto& n : x) xi.push_back(m.var_index(n));
  for (const auto& n : y) yi.push_back(m.var_index(n));
  const std::size_t ei = m.var_index(eve);

  Problem p;
  p.nx = 1;
  p.ny = 1;
  for (auto i : xi) p.nx *= m.variables()[i].alphabet.size();
  for (auto i : yi) p.ny *= m.variables()[i].alphabet.size();
  p.ne = m.variables()[ei].alphabet.size();
  p.pxye.assign(p.nx * p.ny * p.ne, 0.0);

  std::vector<std::size_t> digits;
  for (std::size_t flat = 0; flat < m.table_size(); ++flat) {
    if (m.prob(flat) == 0) continue;
    m.decode(flat, digits);
    std::size_t u = 0, v = 0;
    for (auto i : xi) u = u * m.variables()[i].alphabet.size() + digits[i];
    for (auto i : yi) v = v * m.variables()[i].alphabet.size() + digits[i];
    p.pxye[(u * p.ny + v) * p.ne + digits[ei]] += secdist::to_double(m.prob(flat));
  }
  return p;
}

namespace {

// Contribution of one output symbol whose column is col[e] = P(e) ch(k|e):
// output weight times I(x:y) of the induced mixture.
double column_term(const Problem& p, const double* col) {
  double w = 0.0;
  for (std::size_t e = 0; e < p.ne; ++e) w += col[e];
  if (w <= 0.0) return 0.0;

  std::array<double, 64> jxy{};
  std::array<double, 8> jx{}, jy{};
  for (std::size_t u = 0; u < p.nx; ++u) {
    for (std::size_t v = 0; v < p.ny; ++v) {
      const double* cell = &p.pxye[(u * p.ny + v) * p.ne];
      double s = 0.0;
      for (std::size_t e = 0; e < p.ne; ++e) s += cell[e] * col[e];
      jxy[u * p.ny + v] = s;
      jx[u] += s;
      jy[v] += s;
    }
  }
  double total = 0.0;
  for (std::size_t u = 0; u < p.nx; ++u) {
    for (std::size_t v = 0; v < p.ny; ++v) {
      const double q = jxy[u * p.ny + v];
      if (q <= 0.0) continue;
      total += q * std::log2(q * w / (jx[u] * jy[v]));
    }
  }
  return total;
}

std::vector<double> prior_of(const Problem& p) {
  std::vector<double> pe(p.ne, 0.0);
  for (std::size_t u = 0; u < p.nx; ++u) {
    for (std::size_t v = 0; v < p.ny; ++v) {
      for (std::size_t e = 0; e < p.ne; ++e) pe[e] += p.pxye[(u * p.ny + v) * p.ne + e];
    }
  }
  return pe;
}

// All splits of `steps` units into `parts` ordered buckets, in units of
// `granularity` (the last bucket takes the remainder).
void for_each_split(int steps, int parts, int granularity, std::vector<int>& units,
                    const std::function<void()>& fn, int at = 0, int left = -1) {
  if (left < 0) left = steps;
  if (at == parts - 1) {
    units[at] = left;
    fn();
    return;
  }
  for (int u = 0; u <= left; u += granularity) {
    units[at] = u;
    for_each_split(steps, parts, granularity, units, fn, at + 1, left - u);
  }
}

double min_over_row_splits(const Problem& p, int steps, int granularity) {
  const std::size_t ne = p.ne;
  const std::vector<double> pe = prior_of(p);

  std::vector<std::vector<std::vector<int>>> row_options(ne);
  {
    std::vector<int> units(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      for_each_split(steps, static_cast<int>(ne), granularity, units,
                     [&] { row_options[e].push_back(units); });
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> col(ne);
  std::vector<const std::vector<int>*> chosen(ne);
  std::function<void(std::size_t)> rec = [&](std::size_t e) {
    if (e == ne) {
      double total = 0.0;
      for (std::size_t k = 0; k < ne; ++k) {
        for (std::size_t ee = 0; ee < ne; ++ee) {
          col[ee] = pe[ee] * (*chosen[ee])[k] / steps;
        }
        total += column_term(p, col.data());
      }
      best = std::min(best, total);
      return;
    }
    for (const auto& opt : row_options[e]) {
      chosen[e] = &opt;
      rec(e + 1);
    }
  };
  rec(0);
  return best;
}

// ne == 2: enumerate the first column directly; the second is forced.
double lattice_min_2(const Problem& p, int steps) {
  const std::vector<double> pe = prior_of(p);
  const int n = steps + 1;
  double best = std::numeric_limits<double>::infinity();
  double col[2], rest[2];
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      col[0] = pe[0] * a / steps;
      col[1] = pe[1] * b / steps;
      rest[0] = pe[0] * (steps - a) / steps;
      rest[1] = pe[1] * (steps - b) / steps;
      best = std::min(best, column_term(p, col) + column_term(p, rest));
    }
  }
  return best;
}

// ne == 3: exact branch and bound over output columns. A lattice channel is a
// triple of columns summing to (steps, steps, steps) in per-input units and
// the objective is the sum of per-column terms, so enumerating unordered
// triples through a value-sorted column list allows hard, admissible pruning:
// once the two smallest terms reach the incumbent the rest of the list is dead.
double lattice_min_3(const Problem& p, int steps) {
  const int n = steps + 1;
  const std::size_t ncols = static_cast<std::size_t>(n) * n * n;
  const std::vector<double> pe = prior_of(p);

  std::vector<double> G(ncols), W(ncols);
  double fmin = std::numeric_limits<double>::infinity();
  {
    double col[3];
    std::size_t id = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c, ++id) {
          col[0] = pe[0] * a / steps;
          col[1] = pe[1] * b / steps;
          col[2] = pe[2] * c / steps;
          const double w = col[0] + col[1] + col[2];
          G[id] = column_term(p, col);
          W[id] = w;
          if (w > 0.0) fmin = std::min(fmin, G[id] / w);
        }
      }
    }
  }
  if (!std::isfinite(fmin)) fmin = 0.0;

  auto col_id = [&](int a, int b, int c) {
    return (static_cast<std::size_t>(a) * n + b) * n + c;
  };

  // Incumbent: vertex channels first, then a coarse sub-lattice pass.
  double best = std::numeric_limits<double>::infinity();
  for (int m0 = 0; m0 < 3; ++m0) {
    for (int m1 = 0; m1 < 3; ++m1) {
      for (int m2 = 0; m2 < 3; ++m2) {
        double total = 0.0;
        for (int k = 0; k < 3; ++k) {
          total +=
              G[col_id(m0 == k ? steps : 0, m1 == k ? steps : 0, m2 == k ? steps : 0)];
        }
        best = std::min(best, total);
      }
    }
  }
  if (steps >= 16 && steps % 16 == 0) {
    const int gran = steps / 16;
    std::vector<int> r0(3), r1(3), r2(3);
    for_each_split(steps, 3, gran, r0, [&] {
      for_each_split(steps, 3, gran, r1, [&] {
        for_each_split(steps, 3, gran, r2, [&] {
          double total = 0.0;
          for (int k = 0; k < 3; ++k) total += G[col_id(r0[k], r1[k], r2[k])];
          best = std::min(best, total);
        });
      });
    });
  }

  std::vector<std::uint32_t> order(ncols);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (G[a] != G[b]) return G[a] < G[b];
    return a < b;
  });
  std::vector<std::uint32_t> pos(ncols);
  for (std::size_t r = 0; r < ncols; ++r) pos[order[r]] = static_cast<std::uint32_t>(r);

  std::vector<std::array<int, 3>> units(ncols);
  {
    std::size_t id = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c, ++id) units[id] = {a, b, c};
      }
    }
  }
  const double wtotal = pe[0] + pe[1] + pe[2];

  for (std::size_t ri = 0; ri < ncols; ++ri) {
    const std::uint32_t i = order[ri];
    const double gi = G[i];
    if (3.0 * gi >= best) break;
    if (gi + (wtotal - W[i]) * fmin >= best) continue;
    const auto& ui = units[i];
    for (std::size_t rj = ri; rj < ncols; ++rj) {
      const std::uint32_t j = order[rj];
      if (gi + 2.0 * G[j] >= best) break;
      const auto& uj = units[j];
      const int ra = steps - ui[0] - uj[0];
      const int rb = steps - ui[1] - uj[1];
      const int rc = steps - ui[2] - uj[2];
      if (ra < 0 || rb < 0 || rc < 0) continue;
      const double gij = gi + G[j];
      if (gij + (wtotal - W[i] - W[j]) * fmin >= best) continue;
      const std::size_t k = col_id(ra, rb, rc);
      if (pos[k] < rj) continue; // this triple was already seen at a smaller pair
      const double val = gij + G[k];
      if (val < best) best = val;
    }
  }
  return best;
}

} // namespace

double lattice_min_cmi(const Problem& p, int steps) {
  if (steps < 1) secdist::fail(secdist::Errc::invalid_config, "steps must be >= 1");
  if (p.ne == 1) {
    const std::vector<double> pe = prior_of(p);
    return column_term(p, pe.data());
  }
  if (p.ne == 2) return lattice_min_2(p, steps);
  if (p.ne == 3) return lattice_min_3(p, steps);
  secdist::fail(secdist::Errc::alphabet_too_large, "grid oracle covers |E| <= 3");
}

double lattice_min_cmi_unpruned(const Problem& p, int steps) {
  if (p.ne < 1 || p.ne > 3) {
    secdist::fail(secdist::Errc::alphabet_too_large, "grid oracle covers |E| <= 3");
  }
  return min_over_row_splits(p, steps, 1);
}

} // namespace gridoracle
