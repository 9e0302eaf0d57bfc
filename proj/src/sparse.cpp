#include "rwdiag/sparse.hpp"

#include "rwdiag/errors.hpp"

#include <string>

namespace rwdiag {

double SparseLaw::total() const {
  double s = 0.0;
  for (const auto& [g, p] : mass) s += p;
  return s;
}

double SparseLaw::at(const GroupElement& g) const {
  const auto it = mass.find(g);
  return it == mass.end() ? 0.0 : it->second;
}

SparseLaw sparse_from_support(const std::vector<std::pair<GroupElement, double>>& atoms) {
  SparseLaw law;
  law.mass.reserve(atoms.size());
  for (const auto& [g, p] : atoms) law.mass[g] += p;
  return law;
}

SparseLaw sparse_convolve(const SparseLaw& a, const SparseLaw& b, std::uint64_t budget) {
  const std::uint64_t projected =
      static_cast<std::uint64_t>(a.mass.size()) * static_cast<std::uint64_t>(b.mass.size());
  if (projected > budget) {
    throw BudgetError("sparse_convolve: projected support ~" + std::to_string(projected) +
                      " exceeds budget " + std::to_string(budget));
  }
  SparseLaw out;
  out.mass.reserve(a.mass.size() + b.mass.size());
  for (const auto& [g, pg] : a.mass) {
    for (const auto& [h, ph] : b.mass) {
      out.mass[compose(g, h)] += pg * ph;
    }
  }
  if (out.mass.size() > budget) {
    throw BudgetError("sparse_convolve: support " + std::to_string(out.mass.size()) +
                      " exceeds budget " + std::to_string(budget));
  }
  return out;
}

SparseLaw exact_nstep(const StepDistribution& dist, int n, std::uint64_t budget) {
  if (!dist.finite()) throw FamilyError("exact_nstep: finite support required");
  if (n < 0) throw ValidationError("exact_nstep: n must be >= 0");
  SparseLaw step = sparse_from_support(dist.support);
  if (n == 0) {
    SparseLaw id;
    id.mass[dist.identity()] = 1.0;
    return id;
  }
  SparseLaw law = step;
  for (int k = 2; k <= n; ++k) law = sparse_convolve(law, step, budget);
  return law;
}

std::vector<SparseLaw> exact_nstep_sequence(const StepDistribution& dist, int n,
                                            std::uint64_t budget) {
  if (!dist.finite()) throw FamilyError("exact_nstep_sequence: finite support required");
  std::vector<SparseLaw> laws;
  laws.reserve(static_cast<std::size_t>(n));
  SparseLaw step = sparse_from_support(dist.support);
  laws.push_back(step);
  for (int k = 2; k <= n; ++k) laws.push_back(sparse_convolve(laws.back(), step, budget));
  return laws;
}

std::map<std::int64_t, double> radial_mass_profile(const SparseLaw& law, const Gauge& gauge) {
  std::map<std::int64_t, double> profile;
  for (const auto& [g, p] : law.mass) profile[gauge.norm(g)] += p;
  return profile;
}

std::int64_t quantile_radius_from_profile(const std::map<std::int64_t, double>& profile,
                                          double p) {
  if (profile.empty()) throw ValidationError("quantile_radius: empty law");
  const double threshold = 1.0 - p / 2.0;
  double cum = 0.0;
  for (const auto& [radius, m] : profile) {
    cum += m;
    if (threshold <= 0.0) {
      if (m > 0.0) return radius;
    } else if (cum >= threshold) {
      return radius;
    }
  }
  return profile.rbegin()->first;
}

}  // namespace rwdiag
