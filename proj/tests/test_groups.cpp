#include "rwdiag/errors.hpp"
#include "rwdiag/group.hpp"
#include "rwdiag/rng.hpp"
#include "rwdiag/walk.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwdiag;
using namespace rwdiag::testing;

namespace {

GroupElement random_element(const StepDistribution& dist, Rng& rng, int max_len) {
  GroupElement e = dist.identity();
  const auto len = rng.below(static_cast<std::uint64_t>(max_len) + 1);
  for (std::uint64_t i = 0; i < len; ++i) e = compose(e, dist.sample(rng));
  return e;
}

}  // namespace

TEST_CASE("affine composition law") {
  const AffineElement a{std::log(2.0), 1.0};
  const AffineElement b{std::log(3.0), 4.0};
  const AffineElement ab = compose(a, b);
  CHECK(std::exp(ab.log_a) == doctest::Approx(6.0));
  CHECK(ab.b == doctest::Approx(9.0));

  const AffineElement inv = inverse(a);
  CHECK(std::exp(inv.log_a) == doctest::Approx(0.5));
  CHECK(inv.b == doctest::Approx(-0.5));
  CHECK(is_identity(GroupElement{compose(a, inv)}, 1e-12));
}

TEST_CASE("sol composition matches the matrix product") {
  const SolElement x{1, 1, 0, 0, 1};
  const SolElement y{1, 1, 1, 1, 0};
  const SolElement xy = compose(x, y);
  CHECK(xy.a == doctest::Approx(std::exp(1.0)));
  CHECK(xy.b == doctest::Approx(std::exp(-1.0)));
  CHECK(xy.c == doctest::Approx(1.0));
  CHECK(is_identity(GroupElement{compose(xy, inverse(xy))}, 1e-12));
}

TEST_CASE("identity laws and family mismatch") {
  const GroupElement w = GroupElement{parse_word(2, "abA")};
  CHECK(compose(w, identity_like(w)) == w);
  CHECK(compose(identity_like(w), w) == w);
  CHECK(is_identity(identity_like(w)));
  CHECK(inverse(GroupElement{free_identity(2)}) == GroupElement{free_identity(2)});
  CHECK_THROWS_AS(compose(w, GroupElement{affine_identity()}), FamilyError);
  CHECK_THROWS_AS(compose(GroupElement{parse_word(2, "a")}, GroupElement{parse_word(3, "a")}),
                  FamilyError);
}

TEST_CASE("free word inverse and reduction") {
  const FreeWord ab = parse_word(2, "ab");
  CHECK(format_word(inverse(ab)) == "BA");
  CHECK(format_word(compose(ab, inverse(ab))) == "e");
  CHECK(format_word(compose(parse_word(2, "abb"), parse_word(2, "BBA"))) == "e");
  CHECK(parse_word(2, "aA").letters.empty());
  CHECK(word_length(parse_word(2, "abab")) == 4);
}

TEST_CASE("dl moves have no group law") {
  const GroupElement m{DLMoveElement{2, 2, DLStep{+1, 0}}};
  CHECK_THROWS_AS(compose(m, m), FamilyError);
  CHECK_THROWS_AS(inverse(m), FamilyError);
}

TEST_CASE("associativity on random triples") {
  Rng rng(17);
  SUBCASE("free") {
    const auto dist = free_srw(2);
    for (int i = 0; i < 300; ++i) {
      const auto g = random_element(dist, rng, 8);
      const auto h = random_element(dist, rng, 8);
      const auto k = random_element(dist, rng, 8);
      CHECK(compose(compose(g, h), k) == compose(g, compose(h, k)));
    }
  }
  SUBCASE("lamplighter") {
    const auto dist = lamplighter_sws(3);
    for (int i = 0; i < 300; ++i) {
      const auto g = random_element(dist, rng, 8);
      const auto h = random_element(dist, rng, 8);
      const auto k = random_element(dist, rng, 8);
      CHECK(compose(compose(g, h), k) == compose(g, compose(h, k)));
      CHECK(is_identity(compose(g, inverse(g))));
    }
  }
  SUBCASE("real families within 1e-9 relative") {
    const auto sol = sol_coordinate_walk(1.0, 2.0);
    const auto aff = affine_parametric(ScalarDist{ScalarDist::Kind::Uniform, -0.4, 0.4},
                                       ScalarDist{ScalarDist::Kind::Uniform, -1.0, 1.0});
    for (int i = 0; i < 300; ++i) {
      const auto g = random_element(sol, rng, 6);
      const auto h = random_element(sol, rng, 6);
      const auto k = random_element(sol, rng, 6);
      CHECK(approx_equal(compose(compose(g, h), k), compose(g, compose(h, k)), 1e-9));
      const auto x = random_element(aff, rng, 6);
      const auto y = random_element(aff, rng, 6);
      const auto z = random_element(aff, rng, 6);
      CHECK(approx_equal(compose(compose(x, y), z), compose(x, compose(y, z)), 1e-9));
      CHECK(is_identity(compose(x, inverse(x)), 1e-12));
    }
  }
}

TEST_CASE("busemann heights in horocyclic coordinates") {
  const TreeVertex o = tree_root();
  CHECK(busemann_height(o) == 0);
  CHECK(busemann_height(tree_parent(o)) == -1);   // toward the fixed end
  CHECK(busemann_height(tree_child(o, 1, 3)) == 1);  // away from it
  CHECK(tree_parent(tree_child(o, 2, 3)) == o);
}

TEST_CASE("tree distance equals BFS on the radius-5 ball of T3") {
  const auto ball = bfs_ball<TreeVertex, TreeVertexHash>(
      tree_root(), 5, [](const TreeVertex& v) { return tree_neighbors(v, 3); });
  REQUIRE(ball.size() > 100);
  // Distances from the root agree with BFS depths.
  for (const auto& [v, d] : ball) {
    CHECK(tree_distance(tree_root(), v) == d);
    CHECK(tree_distance(v, v) == 0);
  }
  // All pairs inside the radius-2 sub-ball, against pairwise BFS.
  std::vector<TreeVertex> inner;
  for (const auto& [v, d] : ball) {
    if (d <= 2) inner.push_back(v);
  }
  for (const auto& u : inner) {
    const auto from_u = bfs_ball<TreeVertex, TreeVertexHash>(
        u, 5, [](const TreeVertex& v) { return tree_neighbors(v, 3); });
    std::unordered_map<TreeVertex, std::int64_t, TreeVertexHash> lookup(from_u.begin(),
                                                                        from_u.end());
    for (const auto& v : inner) {
      REQUIRE(lookup.count(v) == 1);
      CHECK(tree_distance(u, v) == lookup.at(v));
    }
  }
}

TEST_CASE("dl distance equals BFS on the radius-4 ball of DL22") {
  const auto ball = bfs_ball<DLVertex, DLVertexHashT>(
      dl_base(), 4, [](const DLVertex& v) { return dl_neighbors(v, 2, 2); });
  for (const auto& [v, d] : ball) {
    CHECK(dl_distance(dl_base(), v) == d);
  }
  // A DL vertex has p + q neighbours, all at distance 1.
  const auto nbs = dl_neighbors(dl_base(), 2, 2);
  CHECK(nbs.size() == 4);
  for (const auto& n : nbs) CHECK(dl_distance(dl_base(), n) == 1);
}

TEST_CASE("dl height constraint is preserved by moves") {
  Rng rng(5);
  DLVertex v = dl_base();
  for (int i = 0; i < 20000; ++i) {
    const auto dir = rng.below(2) == 0 ? +1 : -1;
    const auto digit = static_cast<std::int16_t>(rng.below(2));
    v = dl_apply(v, DLStep{static_cast<std::int8_t>(dir), digit}, 2, 2);
    REQUIRE(dl_valid(v));
  }
}

TEST_CASE("actions: identity, affine on R, lamplighter on DL") {
  const ModelPoint x{0.0};
  CHECK(std::get<double>(act(GroupElement{AffineElement{std::log(2.0), 1.0}}, x)) ==
        doctest::Approx(1.0));
  CHECK(std::get<double>(act(GroupElement{affine_identity()}, x)) == doctest::Approx(0.0));

  // A DL-edge generator moves the base vertex to an adjacent vertex.
  const LampElement gen{2, {{0, 1}}, 1};
  const ModelPoint moved = act(GroupElement{gen}, ModelPoint{dl_base()});
  CHECK(dl_distance(dl_base(), std::get<DLVertex>(moved)) == 1);

  CHECK_THROWS_AS(act(GroupElement{gen}, ModelPoint{0.0}), FamilyError);
}

TEST_CASE("lamplighter action on DL is an isometry") {
  Rng rng(23);
  const auto dist = lamplighter_dl_walk(2, 0.5);
  for (int i = 0; i < 200; ++i) {
    const auto g = std::get<LampElement>(random_element(dist, rng, 10));
    const auto x = std::get<LampElement>(random_element(dist, rng, 10));
    const auto y = std::get<LampElement>(random_element(dist, rng, 10));
    const DLVertex vx = lamplighter_to_dl(x);
    const DLVertex vy = lamplighter_to_dl(y);
    CHECK(dl_distance(lamplighter_act(g, vx), lamplighter_act(g, vy)) == dl_distance(vx, vy));
  }
}

TEST_CASE("free action on the Cayley tree is an isometry") {
  Rng rng(29);
  const auto dist = free_srw(2);
  for (int i = 0; i < 200; ++i) {
    const auto g = std::get<FreeWord>(random_element(dist, rng, 10));
    const auto x = std::get<FreeWord>(random_element(dist, rng, 10));
    const auto y = std::get<FreeWord>(random_element(dist, rng, 10));
    CHECK(word_distance(compose(g, x), compose(g, y)) == word_distance(x, y));
  }
}

TEST_CASE("lamplighter <-> DL encoding round trip") {
  Rng rng(31);
  const auto dist = lamplighter_sws(2);
  for (int i = 0; i < 200; ++i) {
    const auto e = std::get<LampElement>(random_element(dist, rng, 12));
    const DLVertex v = lamplighter_to_dl(e);
    REQUIRE(dl_valid(v));
    CHECK(lamplighter_from_dl(v, 2) == e);
  }
}

TEST_CASE("simulate_walk basics") {
  const auto dist = free_srw(2);
  SUBCASE("n = 0 leaves only the identity") {
    const SamplePath p = simulate_walk(dist, 0, 1);
    CHECK(p.positions.size() == 1);
    CHECK(is_identity(p.positions[0]));
  }
  SUBCASE("point mass gives powers") {
    const auto pm = point_mass(GroupElement{parse_word(2, "a")});
    const SamplePath p = simulate_walk(pm, 5, 1);
    CHECK(format_word(std::get<FreeWord>(p.positions[5])) == "aaaaa");
  }
  SUBCASE("prefix-product invariant and reproducibility") {
    const SamplePath p = simulate_walk(dist, 64, 99);
    const SamplePath q = simulate_walk(dist, 64, 99);
    CHECK(p.positions == q.positions);
    for (std::size_t n = 1; n < p.positions.size(); ++n) {
      CHECK(p.positions[n] == compose(p.positions[n - 1], p.increments[n - 1]));
    }
  }
  SUBCASE("different seeds differ") {
    CHECK(simulate_walk(dist, 64, 1).positions != simulate_walk(dist, 64, 2).positions);
  }
}

TEST_CASE("free SRW escapes at rate about one half") {
  const auto dist = free_srw(2);
  double sum = 0;
  const int paths = 200, n = 2000;
  for (int i = 0; i < paths; ++i) {
    const SamplePath p = simulate_walk(dist, n, Rng::derive_path_seed(2024, i));
    sum += static_cast<double>(word_length(std::get<FreeWord>(p.positions.back()))) / n;
  }
  CHECK(sum / paths == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("vertical drift") {
  CHECK(vertical_drift(lamplighter_dl_walk(2, 0.5)) == doctest::Approx(0.0));
  CHECK(vertical_drift(lamplighter_dl_walk(2, 0.7)) == doctest::Approx(0.4));
  CHECK(vertical_drift(dl_move_walk(2, 3, 0.7)) == doctest::Approx(0.4));
  CHECK(vertical_drift(sol_vertical_walk(1, 1)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(vertical_drift(free_srw(2)), FamilyError);
  const DriftEstimate mc = vertical_drift_mc(lamplighter_dl_walk(2, 0.7), 200, 500, 7);
  CHECK(!mc.diverged);
  CHECK(mc.estimate == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("dl orbit paths respect the move semantics") {
  const auto dist = dl_move_walk(2, 3, 0.6);
  const DLOrbitPath path = simulate_dl_orbit(dist, 500, 11);
  REQUIRE(path.vertices.size() == 501);
  for (std::size_t i = 1; i < path.vertices.size(); ++i) {
    REQUIRE(dl_valid(path.vertices[i]));
    CHECK(path.vertices[i] == dl_apply(path.vertices[i - 1], path.steps[i - 1], 2, 3));
    CHECK(dl_distance(path.vertices[i - 1], path.vertices[i]) == 1);
  }
}

TEST_CASE("element json round trip") {
  const auto fam_free = nlohmann::ordered_json{{"type", "free"}, {"k", 2}};
  const GroupElement w = element_from_json(fam_free, nlohmann::ordered_json("abA"));
  CHECK(format_element(w) == "abA");

  const auto fam_lamp = nlohmann::ordered_json{{"type", "lamplighter"}, {"p", 2}};
  const auto payload = nlohmann::ordered_json{{"lamps", {{"0", 1}, {"3", 1}}}, {"shift", -2}};
  const GroupElement e = element_from_json(fam_lamp, payload);
  const auto back = element_to_json(e);
  CHECK(back.at("shift") == -2);
  CHECK(back.at("lamps").size() == 2);
}
