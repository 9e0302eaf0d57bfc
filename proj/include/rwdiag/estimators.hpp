#pragma once

#include "rwdiag/boundary.hpp"
#include "rwdiag/distribution.hpp"
#include "rwdiag/rn_oracle.hpp"
#include "rwdiag/sparse.hpp"
#include "rwdiag/walk.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rwdiag {

struct EstimatorReport {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t ensemble = 0;
  std::uint64_t excluded = 0;  // paths dropped by the boundary stability rule
  std::vector<std::pair<std::int64_t, double>> trace;
  std::string method;
};

/// 1..9, 10, 20, ..., 90, 100, 200, ... up to and including `horizon`.
std::vector<std::int64_t> decade_checkpoints(std::int64_t horizon);

/// Free-group walk captured once: first increment, positions at the requested
/// checkpoints, and the boundary point extracted from a stabilization window
/// over the last tenth of the simulated steps.
struct FreeWalkCapture {
  FreeWord first_increment;
  std::vector<FreeWord> at;
  FreeWord final_position;
  WordEndExtraction boundary;
  double drift_hat = 0.0;
};
FreeWalkCapture capture_free_walk(const StepDistribution& dist,
                                  const std::vector<std::int64_t>& checkpoints,
                                  std::int64_t horizon, std::uint64_t seed);

/// Same for lamplighter walks (positions encoded as DL_{p,p} vertices) and
/// vertex-level DL walks. The boundary is the left-tree end.
struct DLWalkCapture {
  std::vector<DLVertex> at;
  DLVertex final_vertex;
  TreeEndExtraction boundary;
  double drift_hat = 0.0;
};
DLWalkCapture capture_dl_walk(const StepDistribution& dist,
                              const std::vector<std::int64_t>& checkpoints, std::int64_t horizon,
                              std::uint64_t seed);

/// Monte Carlo evaluation of the boundary-entropy integral: the mean of
/// log d(g1 nu)/d nu (x_infinity) over paths, pairing each path's first
/// increment with that same path's limit point (the stable prefix of the
/// position at the horizon). Paths failing the stability rule are excluded
/// and counted.
EstimatorReport furstenberg_entropy_estimate(const StepDistribution& dist,
                                             const RNDerivativeOracle& oracle,
                                             std::uint64_t paths, std::int64_t horizon,
                                             std::uint64_t seed, int threads = 1);

/// Furstenberg estimator for the stopped walk: the first increment is the
/// position at the first trigger time, the boundary point is shared with the
/// driving walk.
EstimatorReport furstenberg_entropy_stopped(const StepDistribution& dist,
                                            const std::function<bool(const GroupElement&)>& trigger,
                                            const RNDerivativeOracle& oracle, std::uint64_t paths,
                                            std::int64_t horizon, std::uint64_t seed,
                                            int threads = 1);

/// Single-path trace of (1/n) log d(x_n nu)/d nu (x_infinity) for n up to
/// `horizon` (simulation runs to 2*horizon to resolve the limit point).
EstimatorReport ergodic_rn_average(const StepDistribution& dist, const RNDerivativeOracle& oracle,
                                   std::int64_t horizon, std::uint64_t seed);

/// Ensemble of single-path tail values at the horizon, for CI comparisons.
EstimatorReport ergodic_rn_tail_ensemble(const StepDistribution& dist,
                                         const RNDerivativeOracle& oracle, std::uint64_t paths,
                                         std::int64_t horizon, std::uint64_t seed,
                                         int threads = 1);

struct SmbReport {
  std::vector<std::int64_t> ns;
  std::vector<double> mean_statistic;  // ensemble mean of -(1/n) log mu*n(x_n)
  std::vector<double> running_min;     // running minimum of the mean trace
  double value_at_horizon = 0.0;
  double stderr_at_horizon = 0.0;
  std::uint64_t paths = 0;
};

SmbReport smb_statistic(const StepDistribution& dist, int n_max, std::uint64_t paths,
                        std::uint64_t seed, std::uint64_t budget = 10'000'000, int threads = 1);

struct BorelCantelliReport {
  bool integrable = false;  // empirical means stay within the bound
  bool pass = false;        // max tail (1/n) log f_n <= eps over the ensemble
  double max_mean = 0.0;
  double max_tail_statistic = 0.0;
  double bound = 0.0;
  double eps = 0.0;
};

/// Finite-scale rendering of the Borel-Cantelli lemma for a family of
/// positive statistics f_n with uniformly bounded means: checks the bound
/// empirically and asserts (1/n) log f_n <= eps on the tail n >= n_max/2.
BorelCantelliReport borel_cantelli_check(
    const std::function<double(std::uint64_t path, std::int64_t n)>& f, std::uint64_t paths,
    std::int64_t n_max, double bound, double eps);

}  // namespace rwdiag
