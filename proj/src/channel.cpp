#include "secdist/channel.hpp"

#include "secdist/errors.hpp"
#include "secdist/info.hpp"

#include <cmath>
#include <map>
#include <set>

namespace secdist {

namespace {

void check_alphabets(const std::vector<std::string>& input,
                     const std::vector<std::string>& output) {
  if (input.empty() || output.empty()) {
    fail(Errc::invalid_channel, "empty channel alphabet");
  }
  std::set<std::string> in(input.begin(), input.end());
  std::set<std::string> out(output.begin(), output.end());
  if (in.size() != input.size() || out.size() != output.size()) {
    fail(Errc::invalid_channel, "repeated symbols in channel alphabet");
  }
}

} // namespace

Channel Channel::exact(std::vector<std::string> input, std::vector<std::string> output,
                       std::vector<std::vector<Rational>> rows) {
  check_alphabets(input, output);
  if (rows.size() != input.size()) {
    fail(Errc::invalid_channel, "row count does not match input alphabet");
  }
  for (const auto& row : rows) {
    if (row.size() != output.size()) {
      fail(Errc::invalid_channel, "row width does not match output alphabet");
    }
    Rational sum = 0;
    for (const auto& p : row) {
      if (p < 0) fail(Errc::invalid_channel, "negative channel entry");
      sum += p;
    }
    if (sum != 1) {
      fail(Errc::invalid_channel, "row sums to " + format_rational(sum));
    }
  }
  Channel ch;
  ch.input_ = std::move(input);
  ch.output_ = std::move(output);
  ch.rows_.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ch.rows_[i].resize(rows[i].size());
    for (std::size_t j = 0; j < rows[i].size(); ++j) ch.rows_[i][j] = to_double(rows[i][j]);
  }
  ch.exact_rows_ = std::move(rows);
  return ch;
}

Channel Channel::dense(std::vector<std::string> input, std::vector<std::string> output,
                       std::vector<std::vector<double>> rows) {
  check_alphabets(input, output);
  if (rows.size() != input.size()) {
    fail(Errc::invalid_channel, "row count does not match input alphabet");
  }
  for (const auto& row : rows) {
    if (row.size() != output.size()) {
      fail(Errc::invalid_channel, "row width does not match output alphabet");
    }
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) fail(Errc::invalid_channel, "negative channel entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      fail(Errc::invalid_channel, "row sums to " + std::to_string(sum));
    }
  }
  Channel ch;
  ch.input_ = std::move(input);
  ch.output_ = std::move(output);
  ch.rows_ = std::move(rows);
  return ch;
}

Channel Channel::identity(const std::vector<std::string>& alphabet) {
  std::vector<std::size_t> map(alphabet.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) map[i] = i;
  return deterministic(alphabet, alphabet, map);
}

Channel Channel::deterministic(std::vector<std::string> input, std::vector<std::string> output,
                               const std::vector<std::size_t>& map) {
  if (map.size() != input.size()) {
    fail(Errc::invalid_channel, "map size does not match input alphabet");
  }
  std::vector<std::vector<Rational>> rows(input.size(),
                                          std::vector<Rational>(output.size(), Rational(0)));
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] >= output.size()) fail(Errc::invalid_channel, "map target out of range");
    rows[i][map[i]] = 1;
  }
  return exact(std::move(input), std::move(output), std::move(rows));
}

Channel Channel::constant(std::vector<std::string> input, std::vector<std::string> output,
                          std::size_t target_output) {
  return deterministic(std::move(input), std::move(output),
                       std::vector<std::size_t>(input.size(), target_output));
}

const std::vector<std::vector<Rational>>& Channel::exact_rows() const {
  if (!exact_rows_) fail(Errc::invalid_channel, "channel has no exact rows");
  return *exact_rows_;
}

bool Channel::is_deterministic() const {
  if (!exact_rows_) return false;
  for (const auto& row : *exact_rows_) {
    for (const auto& p : row) {
      if (p != 0 && p != 1) return false;
    }
  }
  return true;
}

JointDistribution apply_channel(const JointDistribution& d, const std::string& var,
                                const Channel& ch, const std::string& new_name) {
  const std::size_t vi = d.var_index(var);
  if (d.variables()[vi].alphabet != ch.input_alphabet()) {
    fail(Errc::alphabet_mismatch,
         "channel input alphabet does not match variable '" + var + "'");
  }
  if (!ch.is_exact()) {
    fail(Errc::invalid_channel, "apply_channel requires exact rational rows");
  }
  const auto& rows = ch.exact_rows();

  VariableDef replacement;
  replacement.name = new_name.empty() ? var + "_tilde" : new_name;
  replacement.alphabet = ch.output_alphabet();
  replacement.owner = d.variables()[vi].owner;

  std::vector<std::size_t> digits;
  return d.replace_variable(vi, std::move(replacement),
                            [&](std::size_t flat, std::size_t out_sym) {
                              d.decode(flat, digits);
                              return d.prob(flat) * rows[digits[vi]][out_sym];
                            });
}

namespace {

// Dense evaluator for float channels: collapses P to (x-group, y-group, e)
// doubles and accumulates sum_k sum_uv P(u,v,k) log2( P(u,v,k) P(k) / (P(u,k) P(v,k)) ).
double cmi_via_dense(const JointDistribution& d, const std::vector<std::string>& x,
                     const std::vector<std::string>& y, const std::string& eve,
                     const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> keep = x;
  keep.insert(keep.end(), y.begin(), y.end());
  keep.push_back(eve);
  const JointDistribution m = d.marginal(keep);

  std::vector<std::size_t> xi, yi;
  for (const auto& n : x) xi.push_back(m.var_index(n));
  for (const auto& n : y) yi.push_back(m.var_index(n));
  const std::size_t ei = m.var_index(eve);

  std::size_t nx = 1, ny = 1;
  for (auto i : xi) nx *= m.variables()[i].alphabet.size();
  for (auto i : yi) ny *= m.variables()[i].alphabet.size();
  const std::size_t ne = m.variables()[ei].alphabet.size();
  const std::size_t nk = rows.empty() ? 0 : rows[0].size();

  std::vector<double> pxye(nx * ny * ne, 0.0);
  std::vector<std::size_t> digits;
  for (std::size_t flat = 0; flat < m.table_size(); ++flat) {
    if (m.prob(flat) == 0) continue;
    m.decode(flat, digits);
    std::size_t ix = 0, iy = 0;
    for (auto i : xi) ix = ix * m.variables()[i].alphabet.size() + digits[i];
    for (auto i : yi) iy = iy * m.variables()[i].alphabet.size() + digits[i];
    pxye[(ix * ny + iy) * ne + digits[ei]] += to_double(m.prob(flat));
  }

  double total = 0.0;
  std::vector<double> jxy(nx * ny), jx(nx), jy(ny);
  for (std::size_t k = 0; k < nk; ++k) {
    double w = 0.0;
    std::fill(jx.begin(), jx.end(), 0.0);
    std::fill(jy.begin(), jy.end(), 0.0);
    for (std::size_t u = 0; u < nx; ++u) {
      for (std::size_t v = 0; v < ny; ++v) {
        double s = 0.0;
        const double* cell = &pxye[(u * ny + v) * ne];
        for (std::size_t e = 0; e < ne; ++e) s += cell[e] * rows[e][k];
        jxy[u * ny + v] = s;
        jx[u] += s;
        jy[v] += s;
        w += s;
      }
    }
    if (w <= 0.0) continue;
    for (std::size_t u = 0; u < nx; ++u) {
      for (std::size_t v = 0; v < ny; ++v) {
        const double p = jxy[u * ny + v];
        if (p <= 0.0) continue;
        total += p * std::log2(p * w / (jx[u] * jy[v]));
      }
    }
  }
  return total;
}

} // namespace

double cmi_under_channel(const JointDistribution& d, const std::vector<std::string>& x,
                         const std::vector<std::string>& y, const std::string& eve,
                         const Channel& ch) {
  const std::size_t vi = d.var_index(eve);
  if (d.variables()[vi].alphabet != ch.input_alphabet()) {
    fail(Errc::alphabet_mismatch,
         "channel input alphabet does not match variable '" + eve + "'");
  }
  for (const auto& n : x) {
    if (n == eve) fail(Errc::overlapping_groups, "x overlaps the channel variable");
  }
  for (const auto& n : y) {
    if (n == eve) fail(Errc::overlapping_groups, "y overlaps the channel variable");
  }
  if (ch.is_exact()) {
    const JointDistribution mapped = apply_channel(d, eve, ch);
    const std::string tilde = eve + "_tilde";
    return conditional_mutual_information(mapped, x, y, {tilde});
  }
  const double v = cmi_via_dense(d, x, y, eve, ch.rows());
  if (v < 0.0 && v > -1e-12) return 0.0;
  return v;
}

bool certify_zero_cmi(const JointDistribution& d, const std::vector<std::string>& x,
                      const std::vector<std::string>& y,
                      const std::vector<std::string>& given) {
  InfoQuery q{x, y, given};
  q.validate(d);
  if (x.empty() || y.empty()) fail(Errc::empty_selection, "empty group");

  std::vector<std::string> keep = x;
  keep.insert(keep.end(), y.begin(), y.end());
  keep.insert(keep.end(), given.begin(), given.end());
  const JointDistribution m = d.marginal(keep);

  std::vector<std::size_t> xi, yi, gi;
  for (const auto& n : x) xi.push_back(m.var_index(n));
  for (const auto& n : y) yi.push_back(m.var_index(n));
  for (const auto& n : given) gi.push_back(m.var_index(n));

  // Exact per-g accumulation of P(g), P(u|g)-weights, P(v|g)-weights and the
  // joint P(u,v,g), keyed by digit codes. Cells with P(u,g) = 0 or P(v,g) = 0
  // satisfy the product rule trivially, so only supported keys are stored.
  using Key = std::vector<std::size_t>;
  struct Slice {
    Rational weight;
    std::map<Key, Rational> u, v;
    std::map<std::pair<Key, Key>, Rational> uv;
  };
  std::map<Key, Slice> slices;
  std::vector<std::size_t> digits;
  auto pick = [&](const std::vector<std::size_t>& idx) {
    Key key;
    key.reserve(idx.size());
    for (auto i : idx) key.push_back(digits[i]);
    return key;
  };
  for (std::size_t flat = 0; flat < m.table_size(); ++flat) {
    if (m.prob(flat) == 0) continue;
    m.decode(flat, digits);
    Slice& s = slices[pick(gi)];
    const Key u = pick(xi), v = pick(yi);
    s.weight += m.prob(flat);
    s.u[u] += m.prob(flat);
    s.v[v] += m.prob(flat);
    s.uv[{u, v}] += m.prob(flat);
  }

  // P(u,v,g) * P(g) = P(u,g) * P(v,g) over the full supported product per g.
  for (const auto& [g, s] : slices) {
    for (const auto& [u, wu] : s.u) {
      for (const auto& [v, wv] : s.v) {
        auto it = s.uv.find({u, v});
        const Rational joint = it == s.uv.end() ? Rational(0) : it->second;
        if (joint * s.weight != wu * wv) return false;
      }
    }
  }
  return true;
}

} // namespace secdist
