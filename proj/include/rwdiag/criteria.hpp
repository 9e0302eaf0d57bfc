#pragma once

#include "rwdiag/boundary.hpp"
#include "rwdiag/distribution.hpp"
#include "rwdiag/estimators.hpp"
#include "rwdiag/gauge.hpp"
#include "rwdiag/rn_oracle.hpp"
#include "rwdiag/sparse.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rwdiag {

/// Rate of escape (gauge norm per step) from a pilot ensemble; pilot seeds
/// are disjoint from evaluation seeds by construction.
double estimate_escape_rate(const StepDistribution& dist, std::uint64_t pilot_paths,
                            std::int64_t pilot_horizon, std::uint64_t seed, int threads = 1);

struct RayTrackingReport {
  std::vector<std::int64_t> checkpoints;
  std::vector<double> mean_ratio;  // mean over paths of d(x_n, pi_n(x_inf))/n
  std::vector<double> max_ratio;
  std::uint64_t paths = 0;
  std::uint64_t excluded = 0;
  double rate_used = 0.0;
};

/// Free-group ray map pi_n(xi) = prefix of xi of length floor(A n); the
/// distance is the word metric. Paths are simulated to twice the last
/// checkpoint so the limit point outlasts every prefix request.
RayTrackingReport ray_tracking_free(const StepDistribution& dist, std::optional<double> rate,
                                    std::uint64_t paths, std::int64_t horizon, std::uint64_t seed,
                                    int threads = 1);

/// DL ray map pi_n(xi) = (xi truncated at floor(V n), the point of the
/// omega-ray at height -floor(V n)); the distance is the DL graph metric.
RayTrackingReport ray_tracking_dl(const StepDistribution& dist, std::optional<double> rate,
                                  std::uint64_t paths, std::int64_t horizon, std::uint64_t seed,
                                  int threads = 1);

struct RayGaugeTemperanceReport {
  std::vector<std::int64_t> ns;      // sampled trace times
  std::vector<double> rates;         // fitted growth rate of balls centered at pi_n(b)
  double min_rate = 0.0;
  double max_rate = 0.0;
  GrowthReport reference;            // growth report at the last sampled center
};

/// Ball growth around the moving centers pi_n(b) of a ray map; uniform
/// temperance shows as identical fitted rates across n.
RayGaugeTemperanceReport ray_gauge_temperance_free(std::int32_t k, const WordEnd& boundary,
                                                   double rate, const std::vector<std::int64_t>& ns,
                                                   std::int64_t max_radius);
RayGaugeTemperanceReport ray_gauge_temperance_dl(std::int32_t p, std::int32_t q,
                                                 const TreeEnd& boundary, double rate,
                                                 const std::vector<std::int64_t>& ns,
                                                 std::int64_t max_radius);

/// d(h, geodesic(b-, b+)) in the Cayley tree (exact integer).
std::int64_t free_strip_distance(const FreeWord& h, const WordEnd& b_minus, const WordEnd& b_plus);

/// Exact cardinality of {h : |h| <= radius, d(h, geodesic) <= width},
/// computed by walking the geodesic and its width-neighbourhood.
std::uint64_t free_strip_ball_count(const WordEnd& b_minus, const WordEnd& b_plus,
                                    std::int64_t width, std::int64_t radius);

struct StripReport {
  double p_hat = 0.0;  // frequency of e in S(b-, b+) over bilateral pairs
  std::uint64_t pairs = 0;
  std::uint64_t excluded = 0;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> trace;  // mean over pairs of (1/n) log+ count(S cap G_{|x_n|})
  bool pass = false;          // p_hat > 0
};

/// Strip statistic over bilateral free-group paths: b- from the reflected
/// walk, b+ from the forward walk; the forward half supplies |x_n|. Width < 0
/// builds the empty-strip negative control.
StripReport strip_statistic_free(const StepDistribution& dist, std::int64_t width,
                                 std::uint64_t pairs, std::int64_t horizon, std::uint64_t seed,
                                 int threads = 1);

/// Product strip on DL_{p,q}: membership requires both tree coordinates to be
/// within `width` of the respective boundary rays; counts use the product
/// structure per height.
StripReport strip_statistic_dl(const StepDistribution& dist, std::int64_t width,
                               std::uint64_t pairs, std::int64_t horizon, std::uint64_t seed,
                               int threads = 1);

/// K_n = min{k : mu*n(G_k) >= 1 - p/2} from the exact n-step law.
std::int64_t quantile_radius(const StepDistribution& dist, const Gauge& gauge, int n, double p,
                             std::uint64_t budget = 10'000'000);
/// Empirical variant from sampled endpoints.
std::int64_t quantile_radius_empirical(const StepDistribution& dist, const Gauge& gauge, int n,
                                       double p, std::uint64_t samples, std::uint64_t seed);

struct EntropyCriterionReport {
  std::vector<std::int64_t> ns;
  std::vector<double> mean_statistic;  // -(1/n)[log mu*n(x_n) + log RN(x_n)]
  std::vector<double> running_min;
  double final_running_min = 0.0;
  bool pass = false;
  double eps = 0.0;
};

/// Combined statistic of the exact n-step law and the RN cocycle along the
/// path; the running minimum is the finite-scale liminf proxy. PASS when the
/// running minimum at n_max falls below eps.
EntropyCriterionReport entropy_criterion_check(const StepDistribution& dist,
                                               const RNDerivativeOracle& oracle, int n_max,
                                               std::uint64_t paths, std::uint64_t seed, double eps,
                                               std::uint64_t budget = 10'000'000, int threads = 1);

enum class TrapSetCenter { Identity, RayPoint };

struct TrapSetsReport {
  std::vector<std::int64_t> ns;
  std::vector<double> hit_freq;          // conditioned P^gamma(x_n in A_n)
  std::vector<double> log_measure_rate;  // (1/n) log m(A_n)
  double acceptance_rate = 0.0;
  std::uint64_t accepted = 0;
  bool condition1 = false;  // max hit frequency > 0
  bool condition2 = false;  // max log-measure rate < eps_threshold
  double eps_threshold = 0.0;
};

/// Finite-scale check of the two trap-set conditions on F_k ball families
/// A_n = balls of radius floor(radius_coef * n) centered at the identity or
/// at the ray point of the conditioning boundary prefix gamma. Conditioning
/// is by rejection on the leading `condition_depth` letters of gamma.
TrapSetsReport trap_sets_check(const StepDistribution& dist, TrapSetCenter center,
                               double radius_coef, double ray_rate, const WordEnd& gamma,
                               std::int64_t condition_depth, const std::vector<std::int64_t>& ns,
                               std::uint64_t target_accepted, std::uint64_t max_attempts,
                               std::uint64_t seed, double eps_threshold,
                               double acceptance_floor = 0.01, int threads = 1);

/// log of the F_k ball volume, stable for large radii.
double free_ball_log_volume(std::int32_t k, std::int64_t radius);

}  // namespace rwdiag
