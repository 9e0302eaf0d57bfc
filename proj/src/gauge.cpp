#include "rwdiag/gauge.hpp"

#include "rwdiag/errors.hpp"
#include "rwdiag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace rwdiag {

namespace {

struct LampHash {
  std::size_t operator()(const LampElement& e) const { return hash_element(GroupElement{e}); }
};

struct DLVertexHash {
  std::size_t operator()(const DLVertex& v) const {
    std::size_t h = 0x51ed270b;
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

struct WordHash {
  std::size_t operator()(const FreeWord& w) const { return hash_element(GroupElement{w}); }
};

}  // namespace

Gauge free_word_gauge(std::int32_t k) {
  Gauge g;
  g.kind = Gauge::Kind::WordMetric;
  g.name = "word(F" + std::to_string(k) + ")";
  g.norm = [](const GroupElement& e) {
    const auto* w = std::get_if<FreeWord>(&e);
    if (!w) throw FamilyError("free word gauge applied to non-free element");
    return word_length(*w);
  };
  g.ball_count = [k](std::int64_t r) { return free_ball_volume(k, r); };
  return g;
}

Gauge lamplighter_word_gauge(std::int32_t p) {
  Gauge g;
  g.kind = Gauge::Kind::WordMetric;
  g.name = "word(L" + std::to_string(p) + ")";
  g.norm = [](const GroupElement& e) {
    const auto* l = std::get_if<LampElement>(&e);
    if (!l) throw FamilyError("lamplighter word gauge applied to wrong family");
    return lamplighter_word_norm(*l);
  };
  g.ball_count = [p](std::int64_t r) { return lamplighter_word_ball_volume(p, r); };
  return g;
}

Gauge dl_orbit_gauge(std::int32_t p) {
  Gauge g;
  g.kind = Gauge::Kind::OrbitMetric;
  g.name = "orbit(DL" + std::to_string(p) + "," + std::to_string(p) + ")";
  g.norm = [](const GroupElement& e) {
    const auto* l = std::get_if<LampElement>(&e);
    if (!l) throw FamilyError("DL orbit gauge applied to wrong family");
    return dl_distance(dl_base(), lamplighter_to_dl(*l));
  };
  g.ball_count = [p](std::int64_t r) { return dl_ball_volume(p, p, r); };
  return g;
}

Gauge affine_orbit_gauge() {
  Gauge g;
  g.kind = Gauge::Kind::OrbitMetric;
  g.name = "orbit(Aff)";
  g.norm = [](const GroupElement& e) {
    const auto* a = std::get_if<AffineElement>(&e);
    if (!a) throw FamilyError("affine orbit gauge applied to wrong family");
    return static_cast<std::int64_t>(std::ceil(affine_hyperbolic_norm(*a)));
  };
  return g;
}

Gauge sol_orbit_gauge(double p, double q) {
  Gauge g;
  g.kind = Gauge::Kind::OrbitMetric;
  g.name = "orbit(Sol)";
  (void)p;
  (void)q;
  g.norm = [](const GroupElement& e) {
    const auto* s = std::get_if<SolElement>(&e);
    if (!s) throw FamilyError("sol orbit gauge applied to wrong family");
    return static_cast<std::int64_t>(std::ceil(sol_norm(*s)));
  };
  return g;
}

std::uint64_t free_ball_volume(std::int32_t k, std::int64_t radius) {
  if (radius < 0) return 0;
  // Sphere sizes: 1, 2k, 2k(2k-1), ... exact as long as the count fits.
  std::uint64_t total = 1;
  double sphere = 2.0 * k;
  double check = 1.0;
  std::uint64_t sphere_i = static_cast<std::uint64_t>(2 * k);
  for (std::int64_t r = 1; r <= radius; ++r) {
    check += sphere;
    if (check > 9.0e18) throw BudgetError("free_ball_volume: count exceeds 64-bit range");
    total += sphere_i;
    sphere_i *= static_cast<std::uint64_t>(2 * k - 1);
    sphere *= 2.0 * k - 1.0;
  }
  return total;
}

std::uint64_t lamplighter_word_ball_volume(std::int32_t p, std::int64_t radius,
                                           std::uint64_t budget) {
  // BFS in the Cayley graph of Z_p wr Z with generators {move +-1, lamp +-1}.
  const LampElement id = lamp_identity(p);
  std::unordered_set<LampElement, LampHash> seen{id};
  std::deque<std::pair<LampElement, std::int64_t>> queue{{id, 0}};
  std::vector<LampElement> gens;
  gens.push_back(LampElement{p, {}, 1});
  gens.push_back(LampElement{p, {}, -1});
  gens.push_back(LampElement{p, {{0, 1}}, 0});
  if (p > 2) gens.push_back(LampElement{p, {{0, static_cast<std::int16_t>(p - 1)}}, 0});
  while (!queue.empty()) {
    auto [e, d] = queue.front();
    queue.pop_front();
    if (d == radius) continue;
    for (const auto& g : gens) {
      LampElement next = compose(e, g);
      if (seen.insert(next).second) {
        if (seen.size() > budget) throw BudgetError("lamplighter ball enumeration over budget");
        queue.emplace_back(std::move(next), d + 1);
      }
    }
  }
  return seen.size();
}

std::uint64_t dl_ball_volume_at(const DLVertex& center, std::int32_t p, std::int32_t q,
                                std::int64_t radius, std::uint64_t budget) {
  std::unordered_set<DLVertex, DLVertexHash> seen{center};
  std::deque<std::pair<DLVertex, std::int64_t>> queue{{center, 0}};
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d == radius) continue;
    for (auto& n : dl_neighbors(v, p, q)) {
      if (seen.insert(n).second) {
        if (seen.size() > budget) throw BudgetError("DL ball enumeration over budget");
        queue.emplace_back(std::move(n), d + 1);
      }
    }
  }
  return seen.size();
}

std::uint64_t dl_ball_volume(std::int32_t p, std::int32_t q, std::int64_t radius,
                             std::uint64_t budget) {
  return dl_ball_volume_at(dl_base(), p, q, radius, budget);
}

std::uint64_t free_ball_volume_at(const FreeWord& center, std::int64_t radius,
                                  std::uint64_t budget) {
  std::unordered_set<FreeWord, WordHash> seen{center};
  std::deque<std::pair<FreeWord, std::int64_t>> queue{{center, 0}};
  while (!queue.empty()) {
    auto [w, d] = queue.front();
    queue.pop_front();
    if (d == radius) continue;
    for (std::int32_t l = 1; l <= center.rank; ++l) {
      for (bool inv : {false, true}) {
        FreeWord next = compose(w, free_generator(center.rank, l, inv));
        if (seen.insert(next).second) {
          if (seen.size() > budget) throw BudgetError("free ball enumeration over budget");
          queue.emplace_back(std::move(next), d + 1);
        }
      }
    }
  }
  return seen.size();
}

SubadditivityReport check_subadditive(const Gauge& gauge, const StepDistribution& sampler,
                                      std::uint64_t pairs, std::int64_t product_length,
                                      std::uint64_t seed) {
  SubadditivityReport report;
  Rng rng(seed);
  auto random_element = [&]() {
    GroupElement e = sampler.identity();
    const std::int64_t len = static_cast<std::int64_t>(rng.below(product_length + 1));
    for (std::int64_t i = 0; i < len; ++i) e = compose(e, sampler.sample(rng));
    return e;
  };
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const GroupElement g = random_element();
    const GroupElement h = random_element();
    const std::int64_t lhs = gauge.norm(compose(g, h));
    const std::int64_t rhs = gauge.norm(g) + gauge.norm(h);
    ++report.samples;
    if (lhs > rhs) {
      ++report.violations;
      report.worst_excess = std::max(report.worst_excess, lhs - rhs);
    }
  }
  return report;
}

GrowthReport growth_from_volumes(const std::vector<std::int64_t>& radii,
                                 const std::vector<std::uint64_t>& volumes) {
  if (radii.size() != volumes.size() || radii.size() < 2) {
    throw ValidationError("growth_from_volumes: need >= 2 radii");
  }
  GrowthReport rep;
  rep.radii = radii;
  std::vector<double> xs;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    xs.push_back(static_cast<double>(radii[i]));
    rep.log_volumes.push_back(std::log(static_cast<double>(volumes[i])));
  }
  rep.rate = least_squares_slope(xs, rep.log_volumes);
  // Temperance verdict: the incremental slope settles within 10% over the
  // last three radius steps.
  const std::size_t n = rep.log_volumes.size();
  if (n >= 4) {
    const auto inc = [&](std::size_t i) {
      return (rep.log_volumes[i] - rep.log_volumes[i - 1]) /
             (xs[i] - xs[i - 1]);
    };
    const double last = inc(n - 1);
    double max_rel = 0.0;
    for (std::size_t i = n - 3; i < n; ++i) {
      const double rel = std::fabs(inc(i) - last) / std::max(1e-12, std::fabs(last));
      max_rel = std::max(max_rel, last < 1e-12 ? 0.0 : rel);
    }
    rep.stability = max_rel;
    rep.temperate = std::isfinite(rep.rate) && max_rel < 0.10;
  }
  return rep;
}

GrowthReport temperance_estimate(const Gauge& gauge, std::int64_t max_radius) {
  if (!gauge.ball_count) {
    throw FamilyError("temperance_estimate: gauge has no ball enumerator");
  }
  std::vector<std::int64_t> radii;
  std::vector<std::uint64_t> volumes;
  for (std::int64_t r = 1; r <= max_radius; ++r) {
    radii.push_back(r);
    volumes.push_back(gauge.ball_count(r));
  }
  return growth_from_volumes(radii, volumes);
}

}  // namespace rwdiag
