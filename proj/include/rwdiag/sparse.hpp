#pragma once

#include "rwdiag/distribution.hpp"
#include "rwdiag/gauge.hpp"
#include "rwdiag/group.hpp"

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

namespace rwdiag {

/// Finitely supported measure on a group family. Elements are canonical, so
/// hashing collisions are exact identities.
struct SparseLaw {
  std::unordered_map<GroupElement, double, ElementHash> mass;

  double total() const;
  double at(const GroupElement& g) const;  // 0 if absent
};

SparseLaw sparse_from_support(const std::vector<std::pair<GroupElement, double>>& atoms);

/// Convolution a * b: law of g h with g ~ a, h ~ b (independent). Throws
/// BudgetError naming the projected support size when |a||b| exceeds budget.
SparseLaw sparse_convolve(const SparseLaw& a, const SparseLaw& b, std::uint64_t budget);

/// Exact n-step law of a finite-support step distribution.
SparseLaw exact_nstep(const StepDistribution& dist, int n, std::uint64_t budget = 10'000'000);

/// All laws mu, mu*2, ..., mu*n (shares the iterated convolutions).
std::vector<SparseLaw> exact_nstep_sequence(const StepDistribution& dist, int n,
                                            std::uint64_t budget = 10'000'000);

/// Mass per gauge radius, ordered by radius.
std::map<std::int64_t, double> radial_mass_profile(const SparseLaw& law, const Gauge& gauge);

/// K = min{k : law(G_k) >= 1 - p/2}; for degenerate p (1 - p/2 <= 0) the
/// smallest radius carrying positive mass.
std::int64_t quantile_radius_from_profile(const std::map<std::int64_t, double>& profile, double p);

}  // namespace rwdiag
