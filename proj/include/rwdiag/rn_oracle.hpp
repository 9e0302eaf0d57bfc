#pragma once

#include "rwdiag/boundary.hpp"
#include "rwdiag/gauge.hpp"
#include "rwdiag/group.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rwdiag {

/// Evaluator of log d(g nu)/d nu at a boundary point, for the harmonic
/// measure nu of a specific walk. log_derivative(identity, .) = 0 always.
/// uses_boundary = false marks evaluators that ignore the boundary point
/// (trivial boundary, injected controls); estimators then skip the limit
/// point extraction.
struct RNDerivativeOracle {
  std::string name;
  bool exact = false;
  bool bias_controlled = true;
  bool uses_boundary = true;
  std::function<double(const GroupElement&, const BoundaryPoint&)> log_derivative;
};

/// For the simple random walk on F_k the harmonic measure is the uniform
/// Markov measure on ends, and d(g nu)/d nu(xi) = (2k-1)^(2 c - |g|) with c
/// the length of the common prefix of g and xi. The exponent is exact
/// integer data; the oracle exponentiates it. Throws ResolutionError when the
/// end is not resolved past |g|.
std::int64_t free_srw_rn_exponent(const FreeWord& g, const WordEnd& xi);
RNDerivativeOracle free_srw_oracle(std::int32_t k);

/// Constant-1 derivative (trivial boundary).
RNDerivativeOracle trivial_oracle();

/// Negative control: log d(g nu)/d nu := -rate * |g|, a deliberately wrong
/// derivative whose cocycle accumulation drifts linearly.
RNDerivativeOracle uniform_drift_oracle(double rate, Gauge gauge);

/// Cylinder-frequency estimator of the Aff(R) boundary derivative from an
/// ensemble of limit points: d(g nu)/d nu(xi) ~ nu_hat(g^-1 I)/nu_hat(I) on
/// the bandwidth-h interval I around xi. Bias is uncontrolled (the estimate
/// is labeled accordingly and excluded from acceptance gating); bandwidth
/// defaults to sample_count^(-1/5) times the sample spread.
RNDerivativeOracle affr_cylinder_oracle(std::vector<double> boundary_samples,
                                        double bandwidth = 0.0);

}  // namespace rwdiag
