#include "rwdiag/stopping.hpp"

#include "rwdiag/errors.hpp"
#include "rwdiag/rn_oracle.hpp"
#include "rwdiag/stats.hpp"
#include "rwdiag/walk.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwdiag;
using namespace rwdiag::testing;

namespace {

TriggerPredicate equals(const GroupElement& g) {
  return [g](const GroupElement& h) { return h == g; };
}

}  // namespace

TEST_CASE("trigger set = everything reproduces mu") {
  const auto dist = free_srw(2);
  const MeasureSplit split = make_split(dist, [](const GroupElement&) { return true; });
  CHECK(split.alpha_mass == doctest::Approx(1.0));
  const InducedMeasure induced = induced_measure(split, 1e-12);
  CHECK(induced.deficit == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(induced.terms == 1);
  for (const auto& [g, p] : dist.support) {
    CHECK(induced.theta.at(g) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("induced measure of the integer SRW stopped at +1") {
  // First-hit structure: tau = n forces n-1 down moves then one up move,
  // so theta(1 - (n-1)) = 2^-n.
  const auto dist = integer_srw();
  const GroupElement up{parse_word(1, "a")};
  const MeasureSplit split = make_split(dist, equals(up));
  CHECK(split.alpha_mass == doctest::Approx(0.5));
  const InducedMeasure induced = induced_measure(split, 1e-10);
  CHECK(induced.deficit < 1e-9);
  for (int n = 1; n <= 30; ++n) {
    FreeWord w = free_identity(1);
    for (int i = 0; i < n - 1; ++i) w = compose(w, parse_word(1, "A"));
    w = compose(w, parse_word(1, "a"));
    CHECK(induced.theta.at(GroupElement{w}) ==
          doctest::Approx(std::pow(0.5, n)).epsilon(1e-9));
  }
  // Direct enumeration of increment strings to depth 12 agrees.
  const auto strings_mass = [&](const FreeWord& target) {
    double total = 0.0;
    for (int n = 1; n <= 12; ++n) {
      // The only string of length n hitting +1 at the end and nowhere before
      // consists of n-1 down moves; its probability is 2^-n.
      FreeWord w = free_identity(1);
      for (int i = 0; i < n - 1; ++i) w = compose(w, parse_word(1, "A"));
      w = compose(w, parse_word(1, "a"));
      if (w == target) total += std::pow(0.5, n);
    }
    return total;
  };
  const FreeWord down2_up = parse_word(1, "AAa");
  CHECK(induced.theta.at(GroupElement{compose(free_identity(1), down2_up)}) ==
        doctest::Approx(strings_mass(down2_up)).epsilon(1e-9));
}

TEST_CASE("deficit decays geometrically in the truncation order") {
  const auto dist = integer_srw();
  const MeasureSplit split = make_split(dist, equals(GroupElement{parse_word(1, "a")}));
  // ||beta|| = 1/2, deficit after N+1 terms is 2^-(N+1).
  const InducedMeasure coarse = induced_measure(split, 1e-3);
  const InducedMeasure fine = induced_measure(split, 1e-6);
  CHECK(coarse.deficit <= 1e-3);
  CHECK(fine.deficit <= 1e-6);
  const double rate = std::log(fine.deficit / coarse.deficit) /
                      static_cast<double>(fine.terms - coarse.terms);
  CHECK(rate == doctest::Approx(std::log(0.5)).epsilon(0.05));
}

TEST_CASE("stopping times along fixed paths") {
  const auto dist = free_srw(2);
  SUBCASE("trigger on every increment gives tau_n = n") {
    const SamplePath path = simulate_walk(dist, 20, 3);
    const auto times = stopping_times(path.increments, [](const GroupElement&) { return true; });
    REQUIRE(times.size() == 20);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(times[i] == static_cast<std::int64_t>(i) + 1);
    }
  }
  SUBCASE("no trigger before the horizon is a typed error") {
    const SamplePath path = simulate_walk(point_mass(GroupElement{parse_word(2, "b")}), 10, 4);
    CHECK_THROWS_AS(
        stopping_times(path.increments, equals(GroupElement{parse_word(2, "a")})),
        ResolutionError);
  }
  SUBCASE("stopped positions form a sub-path, exactly") {
    const SamplePath path = simulate_walk(dist, 200, 5);
    const auto times = stopping_times(path.increments, equals(GroupElement{parse_word(2, "a")}));
    REQUIRE(!times.empty());
    GroupElement replay = dist.identity();
    std::size_t next = 0;
    for (std::size_t i = 0; i < path.increments.size(); ++i) {
      replay = compose(replay, path.increments[i]);
      if (next < times.size() && times[next] == static_cast<std::int64_t>(i) + 1) {
        CHECK(replay == path.positions[i + 1]);
        ++next;
      }
    }
  }
}

TEST_CASE("expected stopping time is the reciprocal trigger mass") {
  const auto dist = free_srw(2);
  const MeasureSplit split = make_split(dist, equals(GroupElement{parse_word(2, "a")}));
  CHECK(split.alpha_mass == doctest::Approx(0.25));
  const TauCheck check = expected_tau_check(split, 100000, 6, 4);
  CHECK(check.expected == doctest::Approx(4.0));
  CHECK(check.residual <= 0.04);  // 1 percent of 4
  CHECK(check.residual <= 4.0 * check.stderr_ + 0.02);

  const MeasureSplit half = make_split(integer_srw(), equals(GroupElement{parse_word(1, "a")}));
  const TauCheck check_half = expected_tau_check(half, 20000, 7);
  CHECK(check_half.mean == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("tau_n over n approaches the reciprocal mass along paths") {
  const auto dist = free_srw(2);
  const MeasureSplit split = make_split(dist, equals(GroupElement{parse_word(2, "a")}));
  std::vector<double> ratios;
  for (int i = 0; i < 100; ++i) {
    const SamplePath path = simulate_walk(dist, 5000, Rng::derive_path_seed(900, i));
    const auto times =
        stopping_times(path.increments, [&](const GroupElement& g) { return split.triggers(g); });
    const auto n = static_cast<std::int64_t>(times.size());
    ratios.push_back(static_cast<double>(times.back()) / static_cast<double>(n));
  }
  const MeanStderr ms = mean_stderr(ratios);
  CHECK(std::fabs(ms.mean - 4.0) <= 3.0 * ms.stderr_);
}

TEST_CASE("entropy scaling h_theta = E(tau) h_mu") {
  const auto dist = free_srw(2);
  const MeasureSplit split = make_split(dist, equals(GroupElement{parse_word(2, "a")}));
  const EntropyScalingCheck check =
      entropy_scaling_check(split, free_srw_oracle(2), 3000, 600, 8, 4);
  const double target = check.expected_tau * check.h_mu.estimate;
  CHECK(check.expected_tau == doctest::Approx(4.0));
  CHECK(check.h_theta.estimate == doctest::Approx(2.0 * std::log(3.0)).epsilon(0.08));
  CHECK(check.residual <= 0.05 * std::fabs(target) + 3.0 * check.joint_stderr);
}

TEST_CASE("first moment bound L(theta) <= E(tau) L(mu)") {
  SUBCASE("point mass with full trigger set is an equality") {
    const auto pm = point_mass(GroupElement{parse_word(2, "a")});
    const MeasureSplit split = make_split(pm, [](const GroupElement&) { return true; });
    const FirstMomentCheck check = first_moment_check(split, free_word_gauge(2), 2000, 9);
    CHECK(check.moment_mu == doctest::Approx(1.0));
    CHECK(check.moment_theta_mean == doctest::Approx(1.0));
    CHECK(check.tau_mean == doctest::Approx(1.0));
    CHECK(check.holds);
  }
  SUBCASE("free SRW stopped on a") {
    const MeasureSplit split =
        make_split(free_srw(2), equals(GroupElement{parse_word(2, "a")}));
    const FirstMomentCheck check = first_moment_check(split, free_word_gauge(2), 20000, 10, 4);
    CHECK(check.holds);
    CHECK(check.moment_theta_mean <= 4.0 + 3.0 * check.moment_theta_stderr);
  }
  SUBCASE("integer SRW stopped on +1") {
    const MeasureSplit split =
        make_split(integer_srw(), equals(GroupElement{parse_word(1, "a")}));
    const FirstMomentCheck check = first_moment_check(split, free_word_gauge(1), 20000, 11, 4);
    CHECK(check.holds);
  }
}

TEST_CASE("theta series matches the empirical stopped law (chi-square)") {
  const auto dist = integer_srw();
  const MeasureSplit split = make_split(dist, equals(GroupElement{parse_word(1, "a")}));
  const InducedMeasure induced = induced_measure(split, 1e-10);
  std::vector<std::pair<GroupElement, double>> atoms(induced.theta.mass.begin(),
                                                     induced.theta.mass.end());
  std::vector<double> observed(atoms.size(), 0.0), expected;
  for (const auto& [g, m] : atoms) expected.push_back(m);
  const std::uint64_t samples = 20000;
  for (std::uint64_t i = 0; i < samples; ++i) {
    Rng rng = Rng::for_path(77, i);
    GroupElement pos = dist.identity();
    for (;;) {
      const GroupElement inc = dist.sample(rng);
      pos = compose(pos, inc);
      if (split.triggers(inc)) break;
    }
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (atoms[a].first == pos) {
        observed[a] += 1.0;
        break;
      }
    }
  }
  const ChiSquareResult chi = chi_square_test(observed, expected, samples);
  CHECK(chi.p_value > 0.01);
}

TEST_CASE("grid splits and the bounded-density series") {
  SUBCASE("full trigger interval reproduces mu") {
    const DensityGrid mu = uniform_density(0, 1, 4096);
    const GridSplit split = split_grid_on_interval(mu, 0.0, 1.0);
    const BoundedDensityTransform out = bounded_density_series(split, 1e-9);
    CHECK(out.terms == 1);
    CHECK(out.deficit == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.theta.value_at(0.25) == doctest::Approx(1.0));
  }
  SUBCASE("level-set split with a generous threshold also reproduces mu") {
    const DensityGrid mu = uniform_density(0, 1, 4096);
    const BoundedDensityTransform out = bounded_density_transform(mu, 2.0, 1e-9);
    CHECK(out.terms == 1);
    CHECK(out.theta.mass() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("uniform(0,1) split on (0,1/2): positive entropy and bounded sup") {
    const DensityGrid mu = uniform_density(0, 1, 8192);
    const GridSplit split = split_grid_on_interval(mu, 0.0, 0.5);
    CHECK(split.alpha_mass == doctest::Approx(0.5).epsilon(1e-9));
    const BoundedDensityTransform out = bounded_density_series(split, 1e-10);
    CHECK(out.deficit < 1e-9);
    CHECK(differential_entropy(out.theta) > 0.0);
    CHECK(out.sup_bound == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(out.sup_observed <= out.sup_bound * (1.0 + 1e-6));
    // Mass of the truncated series under the geometric bound.
    CHECK(out.theta.mass() >= 1.0 - 1e-9);
  }
  SUBCASE("default threshold is the mass-median density value") {
    const DensityGrid mu = uniform_density(0, 1, 1024);
    CHECK(default_density_threshold(mu) == doctest::Approx(1.0));
  }
  SUBCASE("series budget is a typed error") {
    const DensityGrid mu = uniform_density(0, 1, 512);
    const GridSplit split = split_grid_on_interval(mu, 0.0, 0.01);
    CHECK_THROWS_AS(bounded_density_series(split, 1e-9, 3), BudgetError);
  }
}
