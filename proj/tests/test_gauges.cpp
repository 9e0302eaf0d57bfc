#include "rwdiag/gauge.hpp"

#include "rwdiag/errors.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwdiag;
using namespace rwdiag::testing;

TEST_CASE("word norms") {
  const Gauge g = free_word_gauge(2);
  CHECK(g.norm(GroupElement{free_identity(2)}) == 0);
  CHECK(g.norm(GroupElement{parse_word(2, "abab")}) == 4);

  const Gauge lg = lamplighter_word_gauge(2);
  CHECK(lg.norm(GroupElement{lamp_identity(2)}) == 0);
  CHECK(lg.norm(GroupElement{LampElement{2, {{0, 1}}, 0}}) == 1);
}

TEST_CASE("lamplighter word norm equals BFS distance on the radius-5 ball") {
  const auto ball = bfs_ball<LampElement, LampHashT>(
      lamp_identity(2), 5, [](const LampElement& e) { return lamplighter_gen_neighbors(e); });
  const Gauge lg = lamplighter_word_gauge(2);
  REQUIRE(ball.size() > 50);
  for (const auto& [e, d] : ball) {
    CHECK(lg.norm(GroupElement{e}) == d);
  }
}

TEST_CASE("lamplighter word norm equals BFS for p = 3") {
  const auto ball = bfs_ball<LampElement, LampHashT>(
      lamp_identity(3), 4, [](const LampElement& e) { return lamplighter_gen_neighbors(e); });
  const Gauge lg = lamplighter_word_gauge(3);
  for (const auto& [e, d] : ball) {
    CHECK(lg.norm(GroupElement{e}) == d);
  }
}

TEST_CASE("dl orbit gauge matches DL distances") {
  const Gauge og = dl_orbit_gauge(2);
  CHECK(og.norm(GroupElement{lamp_identity(2)}) == 0);
  // Orbit norms inside the radius-5 DL ball agree with BFS depths via the
  // simply transitive action.
  const auto ball = bfs_ball<DLVertex, DLVertexHashT>(
      dl_base(), 5, [](const DLVertex& v) { return dl_neighbors(v, 2, 2); });
  for (const auto& [v, d] : ball) {
    CHECK(og.norm(GroupElement{lamplighter_from_dl(v, 2)}) == d);
  }
}

TEST_CASE("norm symmetry under inversion") {
  Rng rng(3);
  const auto free_dist = free_srw(2);
  const auto lamp_dist = lamplighter_sws(2);
  const Gauge fg = free_word_gauge(2);
  const Gauge lg = lamplighter_word_gauge(2);
  const Gauge og = dl_orbit_gauge(2);
  for (int i = 0; i < 300; ++i) {
    GroupElement w = free_dist.identity();
    GroupElement l = lamp_dist.identity();
    const auto len = rng.below(12);
    for (std::uint64_t j = 0; j < len; ++j) {
      w = compose(w, free_dist.sample(rng));
      l = compose(l, lamp_dist.sample(rng));
    }
    CHECK(fg.norm(w) == fg.norm(inverse(w)));
    CHECK(lg.norm(l) == lg.norm(inverse(l)));
    CHECK(og.norm(l) == og.norm(inverse(l)));
  }
}

TEST_CASE("subadditivity holds for the implemented gauges") {
  CHECK(check_subadditive(free_word_gauge(2), free_srw(2), 10000, 12, 1).violations == 0);
  CHECK(check_subadditive(lamplighter_word_gauge(2), lamplighter_sws(2), 3000, 10, 2).violations ==
        0);
  CHECK(check_subadditive(dl_orbit_gauge(2), lamplighter_dl_walk(2, 0.5), 3000, 10, 3).violations ==
        0);
  CHECK(check_subadditive(sol_orbit_gauge(1, 1), sol_coordinate_walk(1, 1), 1000, 6, 4).violations ==
        0);
}

TEST_CASE("exhaustive subadditivity inside the DL radius-6 ball") {
  // Every pair of orbit elements whose product stays in a modest ball.
  const auto ball = bfs_ball<DLVertex, DLVertexHashT>(
      dl_base(), 3, [](const DLVertex& v) { return dl_neighbors(v, 2, 2); });
  const Gauge og = dl_orbit_gauge(2);
  std::vector<LampElement> elements;
  for (const auto& [v, d] : ball) elements.push_back(lamplighter_from_dl(v, 2));
  for (const auto& g : elements) {
    for (const auto& h : elements) {
      const auto gh = compose(g, h);
      CHECK(og.norm(GroupElement{gh}) <= og.norm(GroupElement{g}) + og.norm(GroupElement{h}));
    }
  }
}

TEST_CASE("free ball volumes: closed form vs enumeration") {
  CHECK(free_ball_volume(2, 0) == 1);
  for (std::int64_t r = 1; r <= 8; ++r) {
    const auto expected = static_cast<std::uint64_t>(2 * std::pow(3.0, static_cast<double>(r)) - 1);
    CHECK(free_ball_volume(2, r) == expected);
    CHECK(free_ball_volume_at(free_identity(2), r) == expected);
  }
  // Center-independence (vertex transitivity), measured honestly.
  CHECK(free_ball_volume_at(parse_word(2, "abAb"), 4) == free_ball_volume(2, 4));
  CHECK(free_ball_volume_at(parse_word(2, "abAb"), 0) == 1);
}

TEST_CASE("dl ball volumes") {
  CHECK(dl_ball_volume(2, 2, 0) == 1);
  CHECK(dl_ball_volume(2, 2, 1) == 1 + 4);
  // Transitivity: the same count at a translated center.
  const DLVertex moved = dl_apply(dl_base(), DLStep{+1, 1}, 2, 2);
  CHECK(dl_ball_volume_at(moved, 2, 2, 3) == dl_ball_volume(2, 2, 3));
}

TEST_CASE("growth reports") {
  SUBCASE("free group rate is log 3") {
    const GrowthReport rep = temperance_estimate(free_word_gauge(2), 8);
    CHECK(rep.rate == doctest::Approx(std::log(3.0)).epsilon(0.01));
    CHECK(rep.temperate);
    for (std::size_t i = 1; i < rep.log_volumes.size(); ++i) {
      CHECK(rep.log_volumes[i] >= rep.log_volumes[i - 1]);
    }
  }
  SUBCASE("integers grow polynomially") {
    const GrowthReport rep = temperance_estimate(free_word_gauge(1), 256);
    CHECK(rep.rate < 0.05);
    CHECK(rep.temperate);
  }
  SUBCASE("rate stability under doubling the radius range") {
    const GrowthReport f4 = temperance_estimate(free_word_gauge(2), 4);
    const GrowthReport f8 = temperance_estimate(free_word_gauge(2), 8);
    CHECK(std::fabs(f8.rate - f4.rate) <= std::max(0.1 * f4.rate, 0.02));
    const GrowthReport z128 = temperance_estimate(free_word_gauge(1), 128);
    const GrowthReport z256 = temperance_estimate(free_word_gauge(1), 256);
    CHECK(std::fabs(z256.rate - z128.rate) <= std::max(0.1 * z128.rate, 0.02));
  }
}

TEST_CASE("orbit ball counts stay under the fitted exponential") {
  const Gauge og = dl_orbit_gauge(2);
  const GrowthReport rep = temperance_estimate(og, 6);
  // Residuals of the log-linear fit bounded by log 2: counts <= 2 e^{a + c R}.
  const double n = static_cast<double>(rep.radii.size());
  double sum_x = 0, sum_y = 0;
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    sum_x += static_cast<double>(rep.radii[i]);
    sum_y += rep.log_volumes[i];
  }
  const double intercept = sum_y / n - rep.rate * sum_x / n;
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    const double fitted = intercept + rep.rate * static_cast<double>(rep.radii[i]);
    CHECK(rep.log_volumes[i] <= fitted + std::log(2.0));
  }
}

TEST_CASE("ball enumeration budget is a typed error") {
  CHECK_THROWS_AS(lamplighter_word_ball_volume(2, 30, 1000), BudgetError);
}
