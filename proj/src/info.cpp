#include "secdist/info.hpp"

#include "secdist/errors.hpp"

#include <cmath>
#include <set>

namespace secdist {

namespace {

constexpr double kClampFloor = -1e-12;

double clamp_measure(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v > kClampFloor) return 0.0;
  fail(Errc::internal_check_failed,
       std::string(what) + " evaluated to " + std::to_string(v));
}

void require_disjoint(const JointDistribution& d, const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  std::set<std::size_t> ia;
  for (const auto& n : a) ia.insert(d.var_index(n));
  for (const auto& n : b) {
    if (ia.count(d.var_index(n))) {
      fail(Errc::overlapping_groups, "variable '" + n + "' appears in two groups");
    }
  }
}

// Entropy that tolerates an empty selection (H of nothing is 0); the public
// entry point rejects empty selections.
double entropy_unchecked(const JointDistribution& d, const std::vector<std::string>& vars) {
  if (vars.empty()) return 0.0;
  const JointDistribution m = d.marginal(vars);
  double h = 0.0;
  for (const auto& p : m.table()) {
    if (p == 0) continue;
    const double pd = to_double(p);
    h -= pd * std::log2(pd);
  }
  return clamp_measure(h, "entropy");
}

std::vector<std::string> joined(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

} // namespace

void InfoQuery::validate(const JointDistribution& d) const {
  for (const auto& n : joined(joined(x, y), given)) d.var_index(n);
  require_disjoint(d, x, y);
  require_disjoint(d, x, given);
  require_disjoint(d, y, given);
}

double entropy(const JointDistribution& d, const std::vector<std::string>& vars) {
  if (vars.empty()) fail(Errc::empty_selection, "entropy of no variables");
  return entropy_unchecked(d, vars);
}

double mutual_information(const JointDistribution& d, const std::vector<std::string>& x,
                          const std::vector<std::string>& y) {
  return conditional_mutual_information(d, x, y, {});
}

double conditional_mutual_information(const JointDistribution& d,
                                      const std::vector<std::string>& x,
                                      const std::vector<std::string>& y,
                                      const std::vector<std::string>& given) {
  if (x.empty() || y.empty()) fail(Errc::empty_selection, "empty group");
  require_disjoint(d, x, y);
  require_disjoint(d, x, given);
  require_disjoint(d, y, given);
  const double hxg = entropy_unchecked(d, joined(x, given));
  const double hyg = entropy_unchecked(d, joined(y, given));
  const double hxyg = entropy_unchecked(d, joined(joined(x, y), given));
  const double hg = entropy_unchecked(d, given);
  return clamp_measure(hxg + hyg - hxyg - hg, "conditional mutual information");
}

} // namespace secdist
