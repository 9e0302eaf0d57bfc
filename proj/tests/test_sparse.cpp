#include "rwdiag/sparse.hpp"

#include "rwdiag/errors.hpp"
#include "rwdiag/stats.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwdiag;
using namespace rwdiag::testing;

TEST_CASE("two-step law of the integer SRW is binomial") {
  const SparseLaw law = exact_nstep(integer_srw(), 2);
  CHECK(law.mass.size() == 3);
  CHECK(law.at(GroupElement{parse_word(1, "aa")}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(law.at(GroupElement{free_identity(1)}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(law.at(GroupElement{parse_word(1, "AA")}) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("point mass power") {
  const auto g = GroupElement{parse_word(2, "ab")};
  const SparseLaw law = exact_nstep(point_mass(g), 7);
  CHECK(law.mass.size() == 1);
  CHECK(law.at(GroupElement{parse_word(2, "ababababababab")}) == doctest::Approx(1.0));
}

TEST_CASE("four-step law of the free SRW matches exhaustive enumeration") {
  const auto dist = free_srw(2);
  const SparseLaw law = exact_nstep(dist, 4);
  const auto oracle = enumerate_nstep(dist, 4);
  CHECK(law.total() == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(law.mass.size() == oracle.size());
  for (const auto& [g, p] : oracle) {
    CHECK(law.at(g) == doctest::Approx(p).epsilon(1e-12));
  }
  // Return probability at the identity, from the independent enumeration.
  CHECK(law.at(GroupElement{free_identity(2)}) ==
        doctest::Approx(oracle.at(GroupElement{free_identity(2)})).epsilon(1e-12));
}

TEST_CASE("lamplighter sws law sums to one") {
  const SparseLaw law = exact_nstep(lamplighter_sws(2), 6);
  CHECK(law.total() == doctest::Approx(1.0).epsilon(1e-12));
  const auto oracle = enumerate_nstep(lamplighter_sws(2), 4);
  const SparseLaw law4 = exact_nstep(lamplighter_sws(2), 4);
  REQUIRE(law4.mass.size() == oracle.size());
  for (const auto& [g, p] : oracle) {
    CHECK(law4.at(g) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("budget exhaustion is a typed error naming the estimate") {
  try {
    exact_nstep(free_srw(2), 12, 100);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("exact law agrees with Monte Carlo frequencies (chi-square)") {
  const auto dist = integer_srw();
  const int n = 10;
  const SparseLaw law = exact_nstep(dist, n);
  std::vector<std::pair<GroupElement, double>> atoms(law.mass.begin(), law.mass.end());
  std::vector<double> observed(atoms.size(), 0.0), expected;
  for (const auto& [g, p] : atoms) expected.push_back(p);
  const std::uint64_t samples = 100000;
  for (std::uint64_t i = 0; i < samples; ++i) {
    Rng rng = Rng::for_path(414, i);
    GroupElement pos = dist.identity();
    for (int s = 0; s < n; ++s) pos = compose(pos, dist.sample(rng));
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (atoms[a].first == pos) {
        observed[a] += 1;
        break;
      }
    }
  }
  const ChiSquareResult chi = chi_square_test(observed, expected, samples);
  CHECK(chi.p_value > 0.01);
}

TEST_CASE("radial profile and quantile radius") {
  const Gauge gauge = free_word_gauge(1);
  SUBCASE("point mass walks K_n = n") {
    const auto pm = point_mass(GroupElement{parse_word(1, "a")});
    const SparseLaw law = exact_nstep(pm, 9);
    CHECK(quantile_radius_from_profile(radial_mass_profile(law, gauge), 0.5) == 9);
  }
  SUBCASE("integer SRW quantile against the exact binomial oracle") {
    const int n = 100;
    const SparseLaw law = exact_nstep(integer_srw(), n);
    const auto profile = radial_mass_profile(law, gauge);
    const std::int64_t kn = quantile_radius_from_profile(profile, 0.5);
    // Oracle: binomial tail sums via lgamma.
    const auto binom_cdf_abs = [n](std::int64_t r) {
      double cum = 0;
      for (int k = 0; k <= n; ++k) {
        const std::int64_t s = std::llabs(2LL * k - n);
        if (s <= r) {
          cum += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n - k + 1.0) - n * std::log(2.0));
        }
      }
      return cum;
    };
    std::int64_t oracle_kn = 0;
    while (binom_cdf_abs(oracle_kn) < 0.75) ++oracle_kn;
    CHECK(kn == oracle_kn);
    // Near the normal approximation: the 0.75-quantile of |Z| is ~1.1503,
    // so ceil(1.1503 * sqrt(100)) = 12, within +-2.
    CHECK(kn >= 10);
    CHECK(kn <= 14);
  }
  SUBCASE("degenerate p gives the smallest radius with positive mass") {
    const SparseLaw law = exact_nstep(integer_srw(), 8);
    CHECK(quantile_radius_from_profile(radial_mass_profile(law, gauge), 2.0) == 0);
    const SparseLaw odd = exact_nstep(integer_srw(), 7);
    CHECK(quantile_radius_from_profile(radial_mass_profile(odd, gauge), 2.0) == 1);
  }
  SUBCASE("monotone in n and in p") {
    std::int64_t prev = 0;
    for (int n : {4, 8, 16, 32}) {
      const SparseLaw law = exact_nstep(integer_srw(), n);
      const auto profile = radial_mass_profile(law, gauge);
      const std::int64_t kn = quantile_radius_from_profile(profile, 0.5);
      CHECK(kn >= prev);
      prev = kn;
      std::int64_t prev_p = std::numeric_limits<std::int64_t>::max();
      for (double p : {0.1, 0.5, 1.0, 1.5}) {
        const std::int64_t kp = quantile_radius_from_profile(profile, p);
        CHECK(kp <= prev_p);
        prev_p = kp;
      }
    }
  }
}
