#include "rwdiag/criteria.hpp"

#include "rwdiag/errors.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwdiag;
using namespace rwdiag::testing;

namespace {

WordEnd stream_end(std::int32_t k, const std::string& block, int depth) {
  FreeWord w = free_identity(k);
  while (word_length(w) < depth) w = compose(w, parse_word(k, block));
  return WordEnd{word_prefix(w, depth)};
}

// Brute-force strip distance: minimum over explicit geodesic vertices.
std::int64_t strip_distance_oracle(const FreeWord& h, const WordEnd& bm, const WordEnd& bp) {
  const std::int64_t c = common_prefix_length(bm.prefix, bp.prefix);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const WordEnd* end : {&bm, &bp}) {
    for (std::int64_t j = c; j <= word_length(end->prefix); ++j) {
      best = std::min(best, word_distance(h, word_prefix(end->prefix, j)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("escape rate pilot estimates") {
  CHECK(estimate_escape_rate(free_srw(2), 200, 500, 3) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(estimate_escape_rate(lamplighter_dl_walk(2, 0.7), 200, 500, 4) ==
        doctest::Approx(0.4).epsilon(0.1));
}

TEST_CASE("ray tracking of the deterministic geodesic walk is exactly zero") {
  const auto pm = point_mass(GroupElement{parse_word(2, "a")});
  const RayTrackingReport rep = ray_tracking_free(pm, 1.0, 20, 200, 5);
  CHECK(rep.excluded == 0);
  for (double v : rep.mean_ratio) CHECK(v == 0.0);
  for (double v : rep.max_ratio) CHECK(v == 0.0);
}

TEST_CASE("ray tracking of the free SRW decays") {
  const RayTrackingReport rep = ray_tracking_free(free_srw(2), 0.5, 150, 1000, 6, 4);
  REQUIRE(rep.paths > 100);
  double at100 = 0, at1000 = 0;
  for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
    if (rep.checkpoints[i] == 100) at100 = rep.mean_ratio[i];
    if (rep.checkpoints[i] == 1000) at1000 = rep.mean_ratio[i];
  }
  CHECK(at1000 < at100);
  CHECK(at1000 < 0.1);
}

TEST_CASE("ray tracking of the drifted DL walk decays") {
  const RayTrackingReport rep =
      ray_tracking_dl(lamplighter_dl_walk(2, 0.7), std::nullopt, 120, 1000, 7, 4);
  REQUIRE(rep.paths > 80);
  CHECK(rep.rate_used == doctest::Approx(0.4).epsilon(0.15));
  double at100 = 0, at1000 = 0;
  for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
    if (rep.checkpoints[i] == 100) at100 = rep.mean_ratio[i];
    if (rep.checkpoints[i] == 1000) at1000 = rep.mean_ratio[i];
  }
  CHECK(at1000 < at100);
  CHECK(at1000 < 0.15);
  CHECK_THROWS_AS(ray_tracking_dl(lamplighter_dl_walk(2, 0.3), std::nullopt, 20, 100, 8),
                  ValidationError);
}

TEST_CASE("ray gauges are uniformly temperate by transitivity") {
  const WordEnd xi = stream_end(2, "ab", 40);
  const auto rep = ray_gauge_temperance_free(2, xi, 0.5, {0, 10, 40, 70}, 6);
  CHECK(rep.min_rate == rep.max_rate);  // identical ball counts at every center
  CHECK(rep.max_rate == doctest::Approx(std::log(3.0)).epsilon(0.02));
  CHECK(free_ball_volume_at(word_prefix(xi.prefix, 20), 0) == 1);

  TreeEnd dl_end;
  dl_end.depth = 30;
  dl_end.digits = {{0, 1}, {3, 1}, {7, 1}};
  const auto dl_rep = ray_gauge_temperance_dl(2, 2, dl_end, 0.4, {0, 16, 64}, 5);
  CHECK(dl_rep.min_rate == dl_rep.max_rate);
}

TEST_CASE("strip distances match the brute-force oracle") {
  Rng rng(9);
  const auto dist = free_srw(2);
  for (int trial = 0; trial < 200; ++trial) {
    // Random distinct truncated ends and a random word.
    FreeWord a = free_identity(2), b = free_identity(2), h = free_identity(2);
    for (int i = 0; i < 12; ++i) a = compose(a, std::get<FreeWord>(dist.sample(rng)));
    for (int i = 0; i < 12; ++i) b = compose(b, std::get<FreeWord>(dist.sample(rng)));
    for (std::uint64_t i = rng.below(7); i > 0; --i) {
      h = compose(h, std::get<FreeWord>(dist.sample(rng)));
    }
    if (word_length(a) < 6 || word_length(b) < 6 || a == b) continue;
    const WordEnd bm{a}, bp{b};
    CHECK(free_strip_distance(h, bm, bp) == strip_distance_oracle(h, bm, bp));
  }
  // Identity membership distance is the confluence depth.
  const WordEnd u = stream_end(2, "ab", 20);
  const WordEnd v = stream_end(2, "ba", 20);
  CHECK(free_strip_distance(free_identity(2), u, v) == 0);  // disjoint first letters
  const WordEnd w1{parse_word(2, "abab")};
  const WordEnd w2{parse_word(2, "abba")};
  CHECK(free_strip_distance(free_identity(2), w1, w2) == 2);
}

TEST_CASE("strip ball counts match exhaustive enumeration") {
  // Oracle: enumerate every word of norm <= R and test membership via the
  // brute-force distance.
  const auto enumerate_count = [](const WordEnd& bm, const WordEnd& bp, std::int64_t width,
                                  std::int64_t radius) {
    std::uint64_t count = 0;
    std::vector<FreeWord> all{free_identity(2)};
    for (int l = 1; l <= radius; ++l) {
      for (const auto& w : reduced_words(2, l)) all.push_back(w);
    }
    for (const auto& w : all) {
      if (strip_distance_oracle(w, bm, bp) <= width) ++count;
    }
    return count;
  };
  const std::vector<std::pair<WordEnd, WordEnd>> pairs = {
      {stream_end(2, "ab", 12), stream_end(2, "ba", 12)},    // confluence at e
      {WordEnd{parse_word(2, "abababababab")}, WordEnd{parse_word(2, "abbababababa")}},
      {WordEnd{parse_word(2, "aabABaabABaa")}, WordEnd{parse_word(2, "aabABBaabABB")}},
      {WordEnd{parse_word(2, "bbbbbbbbbbbb")}, WordEnd{parse_word(2, "bbbaaaaaaaaa")}},
  };
  for (const auto& [bm, bp] : pairs) {
    for (std::int64_t width : {0, 1, 2}) {
      for (std::int64_t radius : {0, 1, 2, 5, 7}) {
        CHECK(free_strip_ball_count(bm, bp, width, radius) ==
              enumerate_count(bm, bp, width, radius));
      }
    }
  }
  // Width-0 strips grow linearly: at most 2R + 1 points in the ball.
  const auto& [bm, bp] = pairs[1];
  for (std::int64_t radius : {3, 5, 7}) {
    CHECK(free_strip_ball_count(bm, bp, 0, radius) <=
          static_cast<std::uint64_t>(2 * radius + 1));
  }
}

TEST_CASE("strip membership is equivariant, exactly") {
  Rng rng(10);
  const auto dist = free_srw(2);
  int tested = 0;
  for (int trial = 0; trial < 400 && tested < 200; ++trial) {
    FreeWord a = free_identity(2), b = free_identity(2), h = free_identity(2),
             g = free_identity(2);
    for (int i = 0; i < 30; ++i) a = compose(a, std::get<FreeWord>(dist.sample(rng)));
    for (int i = 0; i < 30; ++i) b = compose(b, std::get<FreeWord>(dist.sample(rng)));
    for (std::uint64_t i = rng.below(6); i > 0; --i) {
      h = compose(h, std::get<FreeWord>(dist.sample(rng)));
    }
    for (std::uint64_t i = rng.below(4); i > 0; --i) {
      g = compose(g, std::get<FreeWord>(dist.sample(rng)));
    }
    if (word_length(a) < 15 || word_length(b) < 15) continue;
    ++tested;
    const WordEnd bm{a}, bp{b};
    const WordEnd gbm = act_on_word_end(g, bm), gbp = act_on_word_end(g, bp);
    for (std::int64_t width : {0, 1, 2}) {
      const bool before = free_strip_distance(h, bm, bp) <= width;
      const bool after = free_strip_distance(compose(g, h), gbm, gbp) <= width;
      CHECK(before == after);
    }
  }
  CHECK(tested >= 100);
}

TEST_CASE("strip statistic on the free SRW") {
  SUBCASE("width 2 has positive identity frequency, increasing in width") {
    double prev = -1.0;
    for (std::int64_t width : {0, 1, 2}) {
      const StripReport rep = strip_statistic_free(free_srw(2), width, 150, 300, 11, 4);
      CHECK(rep.p_hat >= prev);
      prev = rep.p_hat;
      if (width == 2) {
        CHECK(rep.pass);
        CHECK(rep.p_hat > 0.8);
      }
    }
  }
  SUBCASE("width 0 trace is bounded by the linear-growth rate") {
    const StripReport rep = strip_statistic_free(free_srw(2), 0, 100, 300, 12, 4);
    for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
      const double n = static_cast<double>(rep.checkpoints[i]);
      CHECK(rep.trace[i] <= std::log(2.0 * n + 1.0) / n + 0.02);
    }
  }
  SUBCASE("empty strip is the designed violation") {
    const StripReport rep = strip_statistic_free(free_srw(2), -1, 60, 200, 13);
    CHECK(rep.p_hat == 0.0);
    CHECK(!rep.pass);
  }
}

TEST_CASE("strip statistic on DL22") {
  const StripReport rep = strip_statistic_dl(lamplighter_dl_walk(2, 0.7), 2, 40, 200, 14, 4);
  REQUIRE(rep.pairs > 20);
  CHECK(rep.p_hat > 0.0);
  // Sub-exponential intersection growth: the tail of the trace is small.
  CHECK(rep.trace.back() < 0.2);
}

TEST_CASE("quantile radius wrappers") {
  const Gauge gauge = free_word_gauge(1);
  CHECK(quantile_radius(point_mass(GroupElement{parse_word(1, "a")}), gauge, 12, 0.5) == 12);
  const std::int64_t exact = quantile_radius(integer_srw(), gauge, 64, 0.5);
  const std::int64_t empirical = quantile_radius_empirical(integer_srw(), gauge, 64, 0.5, 40000, 15);
  CHECK(std::llabs(exact - empirical) <= 2);
}

TEST_CASE("entropy criterion: pass on the trivial boundary, fail on the drift control") {
  SUBCASE("point-mass walk with trivial oracle is identically zero") {
    const auto pm = point_mass(GroupElement{parse_word(1, "a")});
    const EntropyCriterionReport rep = entropy_criterion_check(pm, trivial_oracle(), 8, 50, 16, 0.2);
    for (double v : rep.mean_statistic) CHECK(v == doctest::Approx(0.0));
    CHECK(rep.pass);
  }
  SUBCASE("integer SRW with the trivial derivative passes at 0.2") {
    const EntropyCriterionReport rep =
        entropy_criterion_check(integer_srw(), trivial_oracle(), 16, 1000, 17, 0.2, 10'000'000, 4);
    CHECK(rep.final_running_min < 0.2);
    CHECK(rep.pass);
    for (std::size_t i = 1; i < rep.running_min.size(); ++i) {
      CHECK(rep.running_min[i] <= rep.running_min[i - 1]);
    }
  }
  SUBCASE("injected drift 0.3 is bounded away from zero") {
    const EntropyCriterionReport rep = entropy_criterion_check(
        integer_srw(), uniform_drift_oracle(0.3, free_word_gauge(1)), 16, 1000, 18, 0.2,
        10'000'000, 4);
    CHECK(rep.final_running_min >= 0.2);
    CHECK(!rep.pass);
  }
  SUBCASE("free SRW with the exact oracle drives the statistic down") {
    const EntropyCriterionReport rep =
        entropy_criterion_check(free_srw(2), free_srw_oracle(2), 12, 400, 19, 0.5, 10'000'000, 4);
    CHECK(rep.pass);
    CHECK(rep.final_running_min < 0.5);
    CHECK(rep.final_running_min >= -0.1);
  }
}

TEST_CASE("trap sets: ray-centered balls pass, full balls fail the measure condition") {
  const auto dist = free_srw(2);
  const auto pilot = capture_free_walk(dist, {}, 512, 0xF00D);
  REQUIRE(pilot.boundary.stable);
  const std::vector<std::int64_t> ns = {16, 32, 64};
  SUBCASE("balls of radius (A + eps) n around the identity grow too fast") {
    const TrapSetsReport rep =
        trap_sets_check(dist, TrapSetCenter::Identity, 0.55, 0.5, pilot.boundary.end, 2, ns, 200,
                        100000, 20, 0.05);
    CHECK(rep.condition1);  // the walk is trapped with frequency near one
    CHECK(*std::max_element(rep.hit_freq.begin(), rep.hit_freq.end()) > 0.9);
    CHECK(!rep.condition2);  // but the measure grows at (A+eps) log 3
    CHECK(rep.log_measure_rate.back() == doctest::Approx(0.55 * std::log(3.0)).epsilon(0.05));
  }
  SUBCASE("radius eps n balls centered on the ray satisfy both conditions") {
    const double eps = 0.1;
    const TrapSetsReport rep =
        trap_sets_check(dist, TrapSetCenter::RayPoint, eps, 0.5, pilot.boundary.end, 2, ns, 200,
                        100000, 21, eps * std::log(3.0) + 0.05);
    CHECK(rep.condition1);
    CHECK(rep.condition2);
    CHECK(rep.acceptance_rate > 0.01);
  }
  SUBCASE("hopeless conditioning trips the acceptance floor") {
    WordEnd gamma = pilot.boundary.end;
    CHECK_THROWS_AS(trap_sets_check(dist, TrapSetCenter::Identity, 0.55, 0.5, gamma, 12, ns, 200,
                                    3000, 22, 0.05),
                    BudgetError);
  }
}
