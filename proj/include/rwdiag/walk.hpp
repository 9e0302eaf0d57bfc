#pragma once

#include "rwdiag/distribution.hpp"
#include "rwdiag/group.hpp"
#include "rwdiag/rng.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace rwdiag {

/// Seeded walk on a group family: increments g_1..g_n and the prefix products
/// x_n = g_1 ... g_n, with positions[0] the identity.
struct SamplePath {
  std::uint64_t seed = 0;
  std::vector<GroupElement> increments;
  std::vector<GroupElement> positions;
};

SamplePath simulate_walk(const StepDistribution& dist, std::int64_t n, std::uint64_t seed);

/// Streaming form: fn(step, increment, position) for step = 1..n, without
/// materializing the path. Used by the ensemble estimators.
template <class Fn>
void walk_scan(const StepDistribution& dist, std::int64_t n, std::uint64_t seed, Fn&& fn) {
  Rng rng(seed);
  GroupElement pos = dist.identity();
  for (std::int64_t step = 1; step <= n; ++step) {
    GroupElement inc = dist.sample(rng);
    pos = compose(pos, inc);
    fn(step, inc, pos);
  }
}

/// Vertex-level walk on DL_{p,q}; positions are graph vertices, not group
/// elements (positions[n] = step[n] applied to positions[n-1]).
struct DLOrbitPath {
  std::uint64_t seed = 0;
  std::int32_t p = 2;
  std::int32_t q = 2;
  std::vector<DLStep> steps;
  std::vector<DLVertex> vertices;
};

DLOrbitPath simulate_dl_orbit(const StepDistribution& dist, std::int64_t n, std::uint64_t seed);

/// Exact expected vertical step E[h] for finite-support distributions on the
/// lamplighter / DL / Sol families.
double vertical_drift(const StepDistribution& dist);

/// Monte Carlo version with a divergence guard: estimates E[h(x_n)]/n over an
/// ensemble and flags non-convergence of the running mean.
struct DriftEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  bool diverged = false;
};
DriftEstimate vertical_drift_mc(const StepDistribution& dist, std::uint64_t paths,
                                std::int64_t steps, std::uint64_t seed);

/// CSV export: step, height, gauge norm (if a norm is given), coordinates.
void write_path_csv(const SamplePath& path,
                    const std::function<std::int64_t(const GroupElement&)>& norm,
                    std::ostream& os);
void write_dl_path_csv(const DLOrbitPath& path, std::ostream& os);

}  // namespace rwdiag
