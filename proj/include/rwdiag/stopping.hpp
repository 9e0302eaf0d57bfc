#pragma once

#include "rwdiag/density.hpp"
#include "rwdiag/distribution.hpp"
#include "rwdiag/estimators.hpp"
#include "rwdiag/gauge.hpp"
#include "rwdiag/sparse.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rwdiag {

using TriggerPredicate = std::function<bool(const GroupElement&)>;

/// Split mu = alpha + beta over a trigger set L: alpha = mu restricted to L,
/// beta the complement. Both are kept as sub-probability pieces of the same
/// finite support.
struct MeasureSplit {
  StepDistribution mu;
  std::vector<bool> in_trigger;  // parallel to mu.support
  double alpha_mass = 0.0;

  bool triggers(const GroupElement& g) const;
};

MeasureSplit make_split(const StepDistribution& mu, const TriggerPredicate& trigger);

/// Truncated series sum of beta^(*n) * alpha: the law of the walk at the
/// first trigger time. Kept deficient (never renormalized); the remaining
/// mass is reported as `deficit` and decays geometrically in the truncation
/// order at rate ||beta||.
struct InducedMeasure {
  SparseLaw theta;
  double deficit = 0.0;
  int terms = 0;
  double beta_mass = 0.0;
};

InducedMeasure induced_measure(const MeasureSplit& split, double eps,
                               std::uint64_t budget = 10'000'000);

/// Strictly increasing trigger times along a fixed increment sequence.
/// Throws ResolutionError if no trigger occurs before the horizon.
std::vector<std::int64_t> stopping_times(const std::vector<GroupElement>& increments,
                                         const TriggerPredicate& trigger);

/// One draw of tau (number of steps to the first trigger); throws
/// BudgetError past max_steps.
std::int64_t sample_tau(const MeasureSplit& split, Rng& rng, std::int64_t max_steps = 1 << 24);

struct TauCheck {
  double mean = 0.0;
  double stderr_ = 0.0;
  double expected = 0.0;  // 1 / ||alpha||
  double residual = 0.0;
  std::uint64_t samples = 0;
};

TauCheck expected_tau_check(const MeasureSplit& split, std::uint64_t samples, std::uint64_t seed,
                            int threads = 1);

struct EntropyScalingCheck {
  EstimatorReport h_mu;
  EstimatorReport h_theta;
  double expected_tau = 0.0;
  double residual = 0.0;      // |h_theta - E(tau) h_mu|
  double joint_stderr = 0.0;  // stderr of the difference
};

EntropyScalingCheck entropy_scaling_check(const MeasureSplit& split,
                                          const RNDerivativeOracle& oracle, std::uint64_t paths,
                                          std::int64_t horizon, std::uint64_t seed,
                                          int threads = 1);

struct FirstMomentCheck {
  double moment_mu = 0.0;  // exact first moment of mu in the gauge
  double moment_theta_mean = 0.0;
  double moment_theta_stderr = 0.0;
  double tau_mean = 0.0;
  bool holds = false;  // moment_theta <= E(tau) * L(mu) + 2 stderr
  std::uint64_t samples = 0;
};

FirstMomentCheck first_moment_check(const MeasureSplit& split, const Gauge& gauge,
                                    std::uint64_t samples, std::uint64_t seed, int threads = 1);

/// Grid split mu = alpha + beta along a cell predicate.
struct GridSplit {
  DensityGrid alpha;
  DensityGrid beta;
  double alpha_mass = 0.0;
  double sup_alpha = 0.0;  // ess-sup of the alpha density (the j bound)
};

/// Level-set split: alpha = mu restricted to {rho <= threshold}.
GridSplit split_grid_at_threshold(const DensityGrid& mu, double threshold);
/// Set split: alpha = mu restricted to the interval [lo, hi).
GridSplit split_grid_on_interval(const DensityGrid& mu, double lo, double hi);

/// Smallest grid value j with mu({rho <= j}) >= 1/2.
double default_density_threshold(const DensityGrid& mu);

/// theta = sum beta^(*n) * alpha on grids, with the sup-density bound
/// sup(alpha) * (1 + ||beta|| + ||beta||^2 + ...) reported next to the
/// observed sup.
struct BoundedDensityTransform {
  DensityGrid theta;
  double deficit = 0.0;
  double sup_bound = 0.0;
  double sup_observed = 0.0;
  int terms = 0;
};

BoundedDensityTransform bounded_density_series(const GridSplit& split, double eps,
                                               int max_terms = 4096);
BoundedDensityTransform bounded_density_transform(const DensityGrid& mu, double threshold,
                                                  double eps, int max_terms = 4096);

}  // namespace rwdiag
