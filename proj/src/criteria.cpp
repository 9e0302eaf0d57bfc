#include "rwdiag/criteria.hpp"

#include "rwdiag/ensemble.hpp"
#include "rwdiag/errors.hpp"
#include "rwdiag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace rwdiag {

namespace {

constexpr std::uint64_t kPilotSeedSalt = 0xA5C1E5ull;

bool is_free_family(const StepDistribution& dist) {
  return dist.finite() && std::holds_alternative<FreeWord>(dist.support.front().first);
}

bool is_dl_like(const StepDistribution& dist) {
  if (!dist.finite()) return false;
  const auto& head = dist.support.front().first;
  return std::holds_alternative<LampElement>(head) || std::holds_alternative<DLMoveElement>(head);
}

StepDistribution reflected(const StepDistribution& dist) {
  StepDistribution out;
  for (const auto& [g, p] : dist.support) out.support.emplace_back(inverse(g), p);
  out.finalize();
  return out;
}

struct DLVertexHash {
  std::size_t operator()(const DLVertex& v) const {
    std::size_t h = 0x2c9a41f3;
    auto mix = [&h](std::uint64_t x) { h ^= x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2); };
    mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(v.left.height)));
    for (const auto& [p, d] : v.left.digits) {
      mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(p)));
      mix(static_cast<std::uint64_t>(d));
    }
    for (const auto& [p, d] : v.right.digits) {
      mix(~static_cast<std::uint64_t>(static_cast<std::int64_t>(p)));
      mix(static_cast<std::uint64_t>(d));
    }
    return h;
  }
};

}  // namespace

double estimate_escape_rate(const StepDistribution& dist, std::uint64_t pilot_paths,
                            std::int64_t pilot_horizon, std::uint64_t seed, int threads) {
  const std::uint64_t pilot_seed = seed ^ kPilotSeedSalt;
  if (is_free_family(dist)) {
    auto rates = ensemble_map<double>(pilot_paths, threads, [&](std::size_t i) {
      const auto cap = capture_free_walk(dist, {}, pilot_horizon,
                                         Rng::derive_path_seed(pilot_seed, i));
      return cap.drift_hat;
    });
    return mean_stderr(rates).mean;
  }
  if (is_dl_like(dist)) {
    auto rates = ensemble_map<double>(pilot_paths, threads, [&](std::size_t i) {
      const auto cap = capture_dl_walk(dist, {}, pilot_horizon,
                                       Rng::derive_path_seed(pilot_seed, i));
      return cap.drift_hat;
    });
    return mean_stderr(rates).mean;
  }
  throw FamilyError("estimate_escape_rate: free, lamplighter or DL walks only");
}

namespace {

struct RayPathStats {
  std::vector<double> ratios;  // per checkpoint
  bool ok = false;
};

RayTrackingReport reduce_ray_stats(const std::vector<std::int64_t>& checkpoints,
                                   std::vector<RayPathStats> stats, double rate) {
  RayTrackingReport rep;
  rep.checkpoints = checkpoints;
  rep.rate_used = rate;
  rep.mean_ratio.assign(checkpoints.size(), 0.0);
  rep.max_ratio.assign(checkpoints.size(), 0.0);
  for (const auto& s : stats) {
    if (!s.ok) {
      ++rep.excluded;
      continue;
    }
    ++rep.paths;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      rep.mean_ratio[i] += s.ratios[i];
      rep.max_ratio[i] = std::max(rep.max_ratio[i], s.ratios[i]);
    }
  }
  if (rep.paths > 0) {
    for (auto& m : rep.mean_ratio) m /= static_cast<double>(rep.paths);
  }
  return rep;
}

}  // namespace

RayTrackingReport ray_tracking_free(const StepDistribution& dist, std::optional<double> rate,
                                    std::uint64_t paths, std::int64_t horizon, std::uint64_t seed,
                                    int threads) {
  if (!is_free_family(dist)) throw FamilyError("ray_tracking_free: free-family walk required");
  const auto checkpoints = decade_checkpoints(horizon);
  const double A =
      rate ? *rate
           : estimate_escape_rate(dist, 1000, std::min<std::int64_t>(horizon, 1000), seed,
                                  threads);
  auto stats = ensemble_map<RayPathStats>(paths, threads, [&](std::size_t i) {
    RayPathStats s;
    const auto cap =
        capture_free_walk(dist, checkpoints, 2 * horizon, Rng::derive_path_seed(seed, i));
    if (!cap.boundary.stable) return s;
    const std::int64_t depth = word_length(cap.boundary.end.prefix);
    s.ratios.reserve(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const std::int64_t n = checkpoints[c];
      const auto len = std::min<std::int64_t>(
          static_cast<std::int64_t>(std::floor(A * static_cast<double>(n))), depth);
      const FreeWord pi = word_prefix(cap.boundary.end.prefix, len);
      s.ratios.push_back(static_cast<double>(word_distance(cap.at[c], pi)) /
                         static_cast<double>(n));
    }
    s.ok = true;
    return s;
  });
  return reduce_ray_stats(checkpoints, std::move(stats), A);
}

RayTrackingReport ray_tracking_dl(const StepDistribution& dist, std::optional<double> rate,
                                  std::uint64_t paths, std::int64_t horizon, std::uint64_t seed,
                                  int threads) {
  if (!is_dl_like(dist)) throw FamilyError("ray_tracking_dl: lamplighter or DL walk required");
  const auto checkpoints = decade_checkpoints(horizon);
  const double V =
      rate ? *rate
           : estimate_escape_rate(dist, 1000, std::min<std::int64_t>(horizon, 1000), seed,
                                  threads);
  if (V <= 0.0) {
    throw ValidationError("ray_tracking_dl: positive vertical drift required for the left-end ray");
  }
  auto stats = ensemble_map<RayPathStats>(paths, threads, [&](std::size_t i) {
    RayPathStats s;
    const auto cap =
        capture_dl_walk(dist, checkpoints, 2 * horizon, Rng::derive_path_seed(seed, i));
    if (!cap.boundary.stable) return s;
    const std::int64_t depth = cap.boundary.end.depth;
    s.ratios.reserve(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const std::int64_t n = checkpoints[c];
      const auto t = std::min<std::int64_t>(
          static_cast<std::int64_t>(std::floor(V * static_cast<double>(n))), depth);
      DLVertex pi;
      pi.left = truncate_end(cap.boundary.end, static_cast<std::int32_t>(t));
      pi.right.height = static_cast<std::int32_t>(-t);
      s.ratios.push_back(static_cast<double>(dl_distance(cap.at[c], pi)) /
                         static_cast<double>(n));
    }
    s.ok = true;
    return s;
  });
  return reduce_ray_stats(checkpoints, std::move(stats), V);
}

RayGaugeTemperanceReport ray_gauge_temperance_free(std::int32_t k, const WordEnd& boundary,
                                                   double rate, const std::vector<std::int64_t>& ns,
                                                   std::int64_t max_radius) {
  if (boundary.prefix.rank != k) {
    throw FamilyError("ray_gauge_temperance_free: boundary rank mismatch");
  }
  RayGaugeTemperanceReport rep;
  rep.ns = ns;
  std::vector<std::int64_t> radii;
  for (std::int64_t r = 1; r <= max_radius; ++r) radii.push_back(r);
  for (std::int64_t n : ns) {
    const auto len = std::min<std::int64_t>(
        static_cast<std::int64_t>(std::floor(rate * static_cast<double>(n))),
        word_length(boundary.prefix));
    const FreeWord center = word_prefix(boundary.prefix, len);
    std::vector<std::uint64_t> volumes;
    for (std::int64_t r : radii) volumes.push_back(free_ball_volume_at(center, r));
    rep.reference = growth_from_volumes(radii, volumes);
    rep.rates.push_back(rep.reference.rate);
  }
  const auto [mn, mx] = std::minmax_element(rep.rates.begin(), rep.rates.end());
  rep.min_rate = *mn;
  rep.max_rate = *mx;
  return rep;
}

RayGaugeTemperanceReport ray_gauge_temperance_dl(std::int32_t p, std::int32_t q,
                                                 const TreeEnd& boundary, double rate,
                                                 const std::vector<std::int64_t>& ns,
                                                 std::int64_t max_radius) {
  RayGaugeTemperanceReport rep;
  rep.ns = ns;
  std::vector<std::int64_t> radii;
  for (std::int64_t r = 1; r <= max_radius; ++r) radii.push_back(r);
  for (std::int64_t n : ns) {
    const auto t = std::min<std::int64_t>(
        static_cast<std::int64_t>(std::floor(rate * static_cast<double>(n))),
        static_cast<std::int64_t>(boundary.depth));
    DLVertex center;
    center.left = truncate_end(boundary, static_cast<std::int32_t>(t));
    center.right.height = static_cast<std::int32_t>(-t);
    std::vector<std::uint64_t> volumes;
    for (std::int64_t r : radii) volumes.push_back(dl_ball_volume_at(center, p, q, r));
    rep.reference = growth_from_volumes(radii, volumes);
    rep.rates.push_back(rep.reference.rate);
  }
  const auto [mn, mx] = std::minmax_element(rep.rates.begin(), rep.rates.end());
  rep.min_rate = *mn;
  rep.max_rate = *mx;
  return rep;
}

std::int64_t free_strip_distance(const FreeWord& h, const WordEnd& b_minus,
                                 const WordEnd& b_plus) {
  const std::int64_t c = common_prefix_length(b_minus.prefix, b_plus.prefix);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const WordEnd* end : {&b_minus, &b_plus}) {
    const std::int64_t depth = word_length(end->prefix);
    const std::int64_t t = common_prefix_length(h, end->prefix);
    const std::int64_t j = std::clamp(t, c, depth);
    const std::int64_t d = j <= t ? word_length(h) - j : word_length(h) + j - 2 * t;
    best = std::min(best, d);
  }
  return best;
}

std::uint64_t free_strip_ball_count(const WordEnd& b_minus, const WordEnd& b_plus,
                                    std::int64_t width, std::int64_t radius) {
  if (width < 0) return 0;
  const std::int32_t k = b_plus.prefix.rank;
  const std::int64_t branching = 2 * k - 1;
  const std::int64_t c = common_prefix_length(b_minus.prefix, b_plus.prefix);

  // Number of reduced continuations of length 1..cap with a fixed first letter.
  const auto subtree_count = [&](std::int64_t cap) -> std::uint64_t {
    std::uint64_t total = 0, level = 1;
    for (std::int64_t d = 1; d <= cap; ++d) {
      total += level;
      level *= static_cast<std::uint64_t>(branching);
    }
    return total;
  };

  std::uint64_t total = 0;
  // Geodesic vertices within the ball, confluence counted once.
  for (const WordEnd* end : {&b_minus, &b_plus}) {
    const std::int64_t depth = word_length(end->prefix);
    const std::int64_t top = std::min(depth, radius);
    if (top >= c) total += static_cast<std::uint64_t>(top - c + 1);
  }
  if (std::min({word_length(b_minus.prefix), word_length(b_plus.prefix), radius}) >= c) {
    total -= 1;  // shared confluence vertex
  }

  // Subtrees hanging off the geodesic, away from the base point.
  for (const WordEnd* end : {&b_minus, &b_plus}) {
    const std::int64_t depth = word_length(end->prefix);
    const std::int64_t top = std::min(depth, radius - 1);
    for (std::int64_t j = c + 1; j <= top; ++j) {
      total += static_cast<std::uint64_t>(2 * k - 2) *
               subtree_count(std::min(width, radius - j));
    }
  }
  // Off-directions at the confluence vertex itself.
  if (c <= radius - 1) {
    const std::int64_t off_dirs = c > 0 ? 2 * k - 3 : 2 * k - 2;
    total += static_cast<std::uint64_t>(off_dirs) * subtree_count(std::min(width, radius - c));
  }
  // The component behind the confluence (toward the base point), c > 0.
  for (std::int64_t i = std::max<std::int64_t>(0, c - width); i <= c - 1; ++i) {
    const std::int64_t d_base = c - i;
    if (i <= radius) total += 1;  // the prefix vertex itself
    const std::int64_t dirs = i == 0 ? 2 * k - 1 : 2 * k - 2;
    total += static_cast<std::uint64_t>(dirs) *
             subtree_count(std::min(width - d_base, radius - i));
  }
  return total;
}

namespace {

struct StripPairStats {
  bool ok = false;
  bool member = false;
  std::vector<double> trace;
};

StripReport reduce_strip_stats(const std::vector<std::int64_t>& checkpoints,
                               std::vector<StripPairStats> stats) {
  StripReport rep;
  rep.checkpoints = checkpoints;
  rep.trace.assign(checkpoints.size(), 0.0);
  std::uint64_t members = 0;
  for (const auto& s : stats) {
    if (!s.ok) {
      ++rep.excluded;
      continue;
    }
    ++rep.pairs;
    if (s.member) ++members;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) rep.trace[i] += s.trace[i];
  }
  if (rep.pairs > 0) {
    for (auto& t : rep.trace) t /= static_cast<double>(rep.pairs);
    rep.p_hat = static_cast<double>(members) / static_cast<double>(rep.pairs);
  }
  rep.pass = rep.p_hat > 0.0;
  return rep;
}

}  // namespace

StripReport strip_statistic_free(const StepDistribution& dist, std::int64_t width,
                                 std::uint64_t pairs, std::int64_t horizon, std::uint64_t seed,
                                 int threads) {
  if (!is_free_family(dist)) throw FamilyError("strip_statistic_free: free-family walk required");
  const auto checkpoints = decade_checkpoints(horizon);
  const StepDistribution reflect = reflected(dist);
  const bool empty_control = width < 0;
  auto stats = ensemble_map<StripPairStats>(pairs, threads, [&](std::size_t i) {
    StripPairStats s;
    const auto fwd =
        capture_free_walk(dist, checkpoints, 2 * horizon, Rng::derive_path_seed(seed, 2 * i));
    const auto ref =
        capture_free_walk(reflect, {}, 2 * horizon, Rng::derive_path_seed(seed, 2 * i + 1));
    if (!fwd.boundary.stable || !ref.boundary.stable) return s;
    const WordEnd b_plus = fwd.boundary.end;
    const WordEnd b_minus = ref.boundary.end;
    const FreeWord origin = free_identity(b_plus.prefix.rank);
    s.member = !empty_control && free_strip_distance(origin, b_minus, b_plus) <= width;
    s.trace.reserve(checkpoints.size());
    for (std::size_t cidx = 0; cidx < checkpoints.size(); ++cidx) {
      const std::int64_t n = checkpoints[cidx];
      const std::int64_t R = word_length(fwd.at[cidx]);
      const std::uint64_t count =
          empty_control ? 0 : free_strip_ball_count(b_minus, b_plus, width, R);
      s.trace.push_back(std::log(static_cast<double>(std::max<std::uint64_t>(count, 1))) /
                        static_cast<double>(n));
    }
    s.ok = true;
    return s;
  });
  return reduce_strip_stats(checkpoints, std::move(stats));
}

namespace {

// d(z, ray to the end) in one tree factor: height minus the confluence with
// the end's digit stream.
std::int64_t tree_ray_distance(const TreeVertex& z, const TreeEnd& end) {
  TreeVertex deep;
  deep.height = std::max(z.height, end.depth);
  deep.digits = end.digits;
  const std::int64_t m = tree_confluence_height(z, deep);
  return z.height - m;
}

TreeEnd right_tree_end_of_reflected_walk(const StepDistribution& dist, std::int64_t horizon,
                                         std::uint64_t seed, bool& stable) {
  // Mirror of capture_dl_walk for the right coordinate of a reflected walk.
  const bool lamp = std::holds_alternative<LampElement>(dist.support.front().first);
  DLVertex vertex = dl_base();
  LampElement pos;
  std::int32_t p = 2, q = 2;
  if (lamp) {
    pos = std::get<LampElement>(dist.identity());
    p = q = pos.mod;
  } else {
    const auto& m = std::get<DLMoveElement>(dist.support.front().first);
    p = m.p;
    q = m.q;
  }
  const std::int64_t window_start = std::max<std::int64_t>(1, (9 * horizon) / 10);
  std::vector<TreeVertex> window;
  Rng rng(seed);
  for (std::int64_t step = 1; step <= horizon; ++step) {
    const GroupElement inc = dist.sample(rng);
    if (lamp) {
      pos = compose(pos, std::get<LampElement>(inc));
      vertex = lamplighter_to_dl(pos);
    } else {
      vertex = dl_apply(vertex, std::get<DLMoveElement>(inc).step, p, q);
    }
    if (step >= window_start && (step - window_start) % std::max<std::int64_t>(1, (horizon - window_start) / 4) == 0) {
      window.push_back(vertex.right);
    }
  }
  window.push_back(vertex.right);
  const double drift = static_cast<double>(vertex.right.height) / static_cast<double>(horizon);
  const auto required = static_cast<std::int64_t>(
      std::ceil(std::max(0.0, drift) * static_cast<double>(horizon) / 2.0));
  const auto extraction = extract_tree_end(window, required);
  stable = extraction.stable;
  return extraction.end;
}

}  // namespace

StripReport strip_statistic_dl(const StepDistribution& dist, std::int64_t width,
                               std::uint64_t pairs, std::int64_t horizon, std::uint64_t seed,
                               int threads) {
  if (!is_dl_like(dist)) throw FamilyError("strip_statistic_dl: lamplighter or DL walk required");
  const auto checkpoints = decade_checkpoints(horizon);
  const bool lamp = std::holds_alternative<LampElement>(dist.support.front().first);
  std::int32_t p = 2, q = 2;
  if (lamp) {
    p = q = std::get<LampElement>(dist.identity()).mod;
  } else {
    const auto& m = std::get<DLMoveElement>(dist.support.front().first);
    p = m.p;
    q = m.q;
  }
  StepDistribution reflect;
  if (lamp) {
    reflect = reflected(dist);
  } else {
    // Vertex-level moves reverse by flipping the direction; digits stay
    // uniform under the named walks this diagnostic supports.
    for (const auto& [g, prob] : dist.support) {
      auto m = std::get<DLMoveElement>(g);
      m.step.dir = static_cast<std::int8_t>(-m.step.dir);
      reflect.support.emplace_back(m, prob);
    }
    reflect.finalize();
  }
  const bool empty_control = width < 0;
  auto stats = ensemble_map<StripPairStats>(pairs, threads, [&](std::size_t i) {
    StripPairStats s;
    const auto fwd =
        capture_dl_walk(dist, checkpoints, 2 * horizon, Rng::derive_path_seed(seed, 2 * i));
    bool ref_stable = false;
    const TreeEnd b_minus = right_tree_end_of_reflected_walk(
        reflect, 2 * horizon, Rng::derive_path_seed(seed, 2 * i + 1), ref_stable);
    if (!fwd.boundary.stable || !ref_stable) return s;
    const TreeEnd b_plus = fwd.boundary.end;

    const DLVertex base = dl_base();
    const auto member_of = [&](const DLVertex& v) {
      return tree_ray_distance(v.left, b_plus) <= width &&
             tree_ray_distance(v.right, b_minus) <= width;
    };
    s.member = !empty_control && member_of(base);

    s.trace.reserve(checkpoints.size());
    for (std::size_t cidx = 0; cidx < checkpoints.size(); ++cidx) {
      const std::int64_t n = checkpoints[cidx];
      std::uint64_t count = 0;
      if (!empty_control) {
        const std::int64_t R = dl_distance(base, fwd.at[cidx]);
        // Multi-source BFS of depth 2*width around the bi-geodesic slice; the
        // product strip lies inside that tube.
        std::unordered_set<DLVertex, DLVertexHash> seen;
        std::deque<std::pair<DLVertex, std::int64_t>> queue;
        const std::int64_t t_lo = std::max<std::int64_t>(-(R + 2 * width), -b_minus.depth);
        const std::int64_t t_hi = std::min<std::int64_t>(R + 2 * width, b_plus.depth);
        for (std::int64_t t = t_lo; t <= t_hi; ++t) {
          DLVertex g;
          g.left = truncate_end(b_plus, static_cast<std::int32_t>(t));
          g.right = truncate_end(b_minus, static_cast<std::int32_t>(-t));
          if (seen.insert(g).second) queue.emplace_back(std::move(g), 0);
        }
        while (!queue.empty()) {
          auto [v, d] = queue.front();
          queue.pop_front();
          if (d == 2 * width) continue;
          for (auto& nb : dl_neighbors(v, p, q)) {
            if (seen.insert(nb).second) queue.emplace_back(std::move(nb), d + 1);
          }
        }
        for (const auto& v : seen) {
          if (member_of(v) && dl_distance(base, v) <= R) ++count;
        }
      }
      s.trace.push_back(std::log(static_cast<double>(std::max<std::uint64_t>(count, 1))) /
                        static_cast<double>(n));
    }
    s.ok = true;
    return s;
  });
  return reduce_strip_stats(checkpoints, std::move(stats));
}

std::int64_t quantile_radius(const StepDistribution& dist, const Gauge& gauge, int n, double p,
                             std::uint64_t budget) {
  const SparseLaw law = exact_nstep(dist, n, budget);
  return quantile_radius_from_profile(radial_mass_profile(law, gauge), p);
}

std::int64_t quantile_radius_empirical(const StepDistribution& dist, const Gauge& gauge, int n,
                                       double p, std::uint64_t samples, std::uint64_t seed) {
  std::map<std::int64_t, double> profile;
  const double w = 1.0 / static_cast<double>(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    GroupElement pos = dist.identity();
    Rng rng = Rng::for_path(seed, i);
    for (int s = 0; s < n; ++s) pos = compose(pos, dist.sample(rng));
    profile[gauge.norm(pos)] += w;
  }
  return quantile_radius_from_profile(profile, p);
}

EntropyCriterionReport entropy_criterion_check(const StepDistribution& dist,
                                               const RNDerivativeOracle& oracle, int n_max,
                                               std::uint64_t paths, std::uint64_t seed, double eps,
                                               std::uint64_t budget, int threads) {
  const auto laws = exact_nstep_sequence(dist, n_max, budget);
  const std::int64_t boundary_horizon =
      oracle.uses_boundary ? std::max<std::int64_t>(64, 8 * n_max) : n_max;

  struct PathStats {
    std::vector<double> values;
    bool ok = false;
  };
  auto stats = ensemble_map<PathStats>(paths, threads, [&](std::size_t i) {
    PathStats s;
    const std::uint64_t path_seed = Rng::derive_path_seed(seed, i);
    BoundaryPoint xi = TrivialBoundary{};
    if (oracle.uses_boundary) {
      const auto cap = capture_free_walk(dist, {}, boundary_horizon, path_seed);
      if (!cap.boundary.stable) return s;
      xi = cap.boundary.end;
    }
    s.values.assign(static_cast<std::size_t>(n_max), 0.0);
    double rn_acc = 0.0;
    GroupElement prev = dist.identity();
    bool failed = false;
    walk_scan(dist, n_max, path_seed,
              [&](std::int64_t step, const GroupElement& inc, const GroupElement& pos) {
                if (failed) return;
                // Cocycle accumulation: log RN(x_n) = sum log RN(g_k) at the
                // shifted boundary point.
                BoundaryPoint shifted = xi;
                if (oracle.uses_boundary) {
                  shifted = act_on_word_end(inverse(std::get<FreeWord>(prev)),
                                            std::get<WordEnd>(xi));
                }
                try {
                  rn_acc += oracle.log_derivative(inc, shifted);
                } catch (const ResolutionError&) {
                  failed = true;
                  return;
                }
                const double mass = laws[static_cast<std::size_t>(step - 1)].at(pos);
                s.values[static_cast<std::size_t>(step - 1)] =
                    -(std::log(mass) + rn_acc) / static_cast<double>(step);
                prev = pos;
              });
    s.ok = !failed;
    return s;
  });

  EntropyCriterionReport rep;
  rep.eps = eps;
  std::uint64_t included = 0;
  std::vector<double> sums(static_cast<std::size_t>(n_max), 0.0);
  for (const auto& s : stats) {
    if (!s.ok) continue;
    ++included;
    for (int n = 0; n < n_max; ++n) sums[static_cast<std::size_t>(n)] += s.values[static_cast<std::size_t>(n)];
  }
  if (included == 0) throw ResolutionError("entropy_criterion_check: all paths excluded");
  for (int n = 1; n <= n_max; ++n) {
    rep.ns.push_back(n);
    rep.mean_statistic.push_back(sums[static_cast<std::size_t>(n - 1)] /
                                 static_cast<double>(included));
    rep.running_min.push_back(rep.running_min.empty()
                                  ? rep.mean_statistic.back()
                                  : std::min(rep.running_min.back(), rep.mean_statistic.back()));
  }
  rep.final_running_min = rep.running_min.back();
  rep.pass = rep.final_running_min < eps;
  return rep;
}

double free_ball_log_volume(std::int32_t k, std::int64_t radius) {
  if (radius <= 0) return 0.0;
  if (radius <= 25) {
    return std::log(static_cast<double>(free_ball_volume(k, radius)));
  }
  // V = 1 + 2k((2k-1)^r - 1)/(2k-2); for large r the leading term dominates.
  const double br = 2.0 * k - 1.0;
  const double lead = std::log(2.0 * k / (2.0 * k - 2.0)) + static_cast<double>(radius) * std::log(br);
  return lead;
}

TrapSetsReport trap_sets_check(const StepDistribution& dist, TrapSetCenter center,
                               double radius_coef, double ray_rate, const WordEnd& gamma,
                               std::int64_t condition_depth, const std::vector<std::int64_t>& ns,
                               std::uint64_t target_accepted, std::uint64_t max_attempts,
                               std::uint64_t seed, double eps_threshold, double acceptance_floor,
                               int threads) {
  (void)threads;
  if (!is_free_family(dist)) throw FamilyError("trap_sets_check: free-family walk required");
  if (word_length(gamma.prefix) < condition_depth) {
    throw ValidationError("trap_sets_check: conditioning prefix shorter than condition_depth");
  }
  TrapSetsReport rep;
  rep.ns = ns;
  rep.eps_threshold = eps_threshold;
  const std::int64_t max_n = *std::max_element(ns.begin(), ns.end());
  const std::int32_t k = gamma.prefix.rank;

  std::vector<std::uint64_t> hits(ns.size(), 0);
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  for (; attempts < max_attempts && accepted < target_accepted; ++attempts) {
    const auto cap = capture_free_walk(dist, ns, 2 * max_n, Rng::derive_path_seed(seed, attempts));
    if (!cap.boundary.stable) continue;
    if (common_prefix_length(cap.boundary.end.prefix, gamma.prefix) < condition_depth) continue;
    ++accepted;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const std::int64_t n = ns[i];
      const auto r = static_cast<std::int64_t>(std::floor(radius_coef * static_cast<double>(n)));
      bool inside = false;
      if (center == TrapSetCenter::Identity) {
        inside = word_length(cap.at[i]) <= r;
      } else {
        const auto len = std::min<std::int64_t>(
            static_cast<std::int64_t>(std::floor(ray_rate * static_cast<double>(n))),
            word_length(gamma.prefix));
        inside = word_distance(cap.at[i], word_prefix(gamma.prefix, len)) <= r;
      }
      if (inside) ++hits[i];
    }
    // Rejection-sampled conditioning: bail out early if acceptance is hopeless.
    if (attempts + 1 >= 200 && accepted == 0) break;
  }
  rep.accepted = accepted;
  rep.acceptance_rate =
      attempts > 0 ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0;
  if (accepted == 0 || rep.acceptance_rate < acceptance_floor) {
    throw BudgetError("trap_sets_check: conditioning acceptance rate " +
                      std::to_string(rep.acceptance_rate) + " below floor " +
                      std::to_string(acceptance_floor));
  }
  for (std::size_t i = 0; i < ns.size(); ++i) {
    rep.hit_freq.push_back(static_cast<double>(hits[i]) / static_cast<double>(accepted));
    const auto r = static_cast<std::int64_t>(std::floor(radius_coef * static_cast<double>(ns[i])));
    rep.log_measure_rate.push_back(free_ball_log_volume(k, r) / static_cast<double>(ns[i]));
  }
  rep.condition1 = *std::max_element(rep.hit_freq.begin(), rep.hit_freq.end()) > 0.0;
  rep.condition2 =
      *std::max_element(rep.log_measure_rate.begin(), rep.log_measure_rate.end()) < eps_threshold;
  return rep;
}

}  // namespace rwdiag
