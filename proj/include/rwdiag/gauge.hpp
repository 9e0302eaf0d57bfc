#pragma once

#include "rwdiag/distribution.hpp"
#include "rwdiag/group.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rwdiag {

/// Gauge realized through its norm: the level sets G_n = {g : norm(g) <= n}
/// are nested by construction and exhaust the family. `ball_count` (when the
/// family is discrete and enumerable) returns the exact cardinality of G_n.
struct Gauge {
  enum class Kind { WordMetric, OrbitMetric, Custom };

  Kind kind = Kind::WordMetric;
  std::string name;
  bool claimed_subadditive = true;
  std::function<std::int64_t(const GroupElement&)> norm;
  std::function<std::uint64_t(std::int64_t)> ball_count;
};

Gauge free_word_gauge(std::int32_t k);
Gauge lamplighter_word_gauge(std::int32_t p);
/// Orbit gauge |g| = d(o, g.o) on DL_{p,p}; the action is simply transitive,
/// so ball counts equal DL vertex ball counts.
Gauge dl_orbit_gauge(std::int32_t p);
Gauge affine_orbit_gauge();
Gauge sol_orbit_gauge(double p, double q);

std::uint64_t free_ball_volume(std::int32_t k, std::int64_t radius);
std::uint64_t lamplighter_word_ball_volume(std::int32_t p, std::int64_t radius,
                                           std::uint64_t budget = 20'000'000);
std::uint64_t dl_ball_volume(std::int32_t p, std::int32_t q, std::int64_t radius,
                             std::uint64_t budget = 20'000'000);
/// Ball count of DL_{p,q} around an arbitrary center (vertex-transitivity
/// makes it center-independent; this measures it honestly).
std::uint64_t dl_ball_volume_at(const DLVertex& center, std::int32_t p, std::int32_t q,
                                std::int64_t radius, std::uint64_t budget = 20'000'000);
/// Word-metric ball count of F_k around an arbitrary center by BFS.
std::uint64_t free_ball_volume_at(const FreeWord& center, std::int64_t radius,
                                  std::uint64_t budget = 20'000'000);

struct SubadditivityReport {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  std::int64_t worst_excess = 0;
};

/// Checks |gh| <= |g| + |h| on random pairs drawn as bounded-length products
/// of the given step distribution.
SubadditivityReport check_subadditive(const Gauge& gauge, const StepDistribution& sampler,
                                      std::uint64_t pairs, std::int64_t product_length,
                                      std::uint64_t seed);

struct GrowthReport {
  std::vector<std::int64_t> radii;
  std::vector<double> log_volumes;
  double rate = 0.0;       // least-squares slope of log volume vs radius
  bool temperate = false;  // incremental slope stabilized over the last radii
  double stability = 0.0;  // max relative change of the incremental slope, last 3 steps
};

GrowthReport growth_from_volumes(const std::vector<std::int64_t>& radii,
                                 const std::vector<std::uint64_t>& volumes);
GrowthReport temperance_estimate(const Gauge& gauge, std::int64_t max_radius);

}  // namespace rwdiag
