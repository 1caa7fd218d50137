#include <catch2/catch_amalgamated.hpp>

#include "fanih/fan.hpp"
#include "fanih/hvector.hpp"

using namespace fanih;

namespace {

std::vector<FieldScalar> v(std::initializer_list<long long> xs) {
  std::vector<FieldScalar> r;
  for (long long x : xs) r.emplace_back(x);
  return r;
}

PoincarePolynomial pp(std::initializer_list<long long> xs) {
  return PoincarePolynomial(std::vector<long long>(xs));
}

Fan octant_fan() {
  return build_fan(3, {v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1})}, {{0, 1, 2}});
}

Fan quadrant_fan() { return build_fan(2, {v({1, 0}), v({0, 1})}, {{0, 1}}); }

Fan half_plane_fan() {
  return build_fan(2, {v({1, 0}), v({0, 1}), v({-1, 0})}, {{0, 1}, {1, 2}});
}

Fan quadrants4_fan() {
  return build_fan(2, {v({1, 0}), v({0, 1}), v({-1, 0}), v({0, -1})},
                   {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

Fan pentagon_fan() {
  return build_fan(2,
                   {v({1, 0}), v({0, 1}), v({-1, 0}), v({-1, -1}), v({1, -1})},
                   {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
}

Fan opposite_quadrants_fan() {
  return build_fan(2, {v({1, 0}), v({0, 1}), v({-1, 0}), v({0, -1})},
                   {{0, 1}, {2, 3}});
}

Fan square_cone_fan() {
  return build_fan(3, {v({1, 1, 1}), v({1, -1, 1}), v({-1, 1, 1}), v({-1, -1, 1})},
                   {{0, 1, 2, 3}});
}

std::vector<std::vector<FieldScalar>> cube_vertices(bool lift) {
  std::vector<std::vector<FieldScalar>> rays;
  for (int i = 0; i < 8; ++i) {
    std::vector<FieldScalar> r;
    r.emplace_back((i & 4) ? -1 : 1);
    r.emplace_back((i & 2) ? -1 : 1);
    r.emplace_back((i & 1) ? -1 : 1);
    if (lift) r.emplace_back(1);
    rays.push_back(std::move(r));
  }
  return rays;
}

Fan cube_face_fan() {
  return build_fan(3, cube_vertices(false),
                   {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 4, 5}, {2, 3, 6, 7},
                    {0, 2, 4, 6}, {1, 3, 5, 7}});
}

Fan cube_cone_fan() {
  return build_fan(4, cube_vertices(true), {{0, 1, 2, 3, 4, 5, 6, 7}});
}

Fan octahedron_fan() {
  return build_fan(3,
                   {v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1}), v({-1, 0, 0}),
                    v({0, -1, 0}), v({0, 0, -1})},
                   {{0, 1, 2}, {0, 1, 5}, {0, 4, 2}, {0, 4, 5},
                    {3, 1, 2}, {3, 1, 5}, {3, 4, 2}, {3, 4, 5}});
}

Fan octahedron_cone_fan() {
  return build_fan(4,
                   {v({1, 0, 0, 1}), v({0, 1, 0, 1}), v({0, 0, 1, 1}),
                    v({-1, 0, 0, 1}), v({0, -1, 0, 1}), v({0, 0, -1, 1})},
                   {{0, 1, 2, 3, 4, 5}});
}

}  // namespace

TEST_CASE("polynomial helpers") {
  CHECK(pow_t2_minus_1(0) == pp({1}));
  CHECK(pow_t2_minus_1(1) == pp({-1, 1}));
  CHECK(pow_t2_minus_1(3) == pp({-1, 3, -3, 1}));
  CHECK(truncate_below_tdegree(pp({1, 2, 3}), 3) == pp({1, 2}));
  CHECK(truncate_below_tdegree(pp({1, 2, 3}), 4) == pp({1, 2}));
  CHECK(truncate_below_tdegree(pp({1, 2, 3}), 5) == pp({1, 2, 3}));
  CHECK(reverse_degree(pp({0, 1, 1}), 2) == pp({1, 1}));
  CHECK_THROWS_AS(reverse_degree(pp({1, 1, 1}), 1), std::invalid_argument);
  CHECK(pp({1, 1}).str() == "1 + t^2");
  CHECK(pp({1, 4}).str() == "1 + 4*t^2");
  CHECK(PoincarePolynomial{}.str() == "0");
}

TEST_CASE("local invariants of simplicial cones are trivial") {
  for (Fan f : {octant_fan(), quadrant_fan()}) {
    FanPoset p = poset_of(f);
    std::vector<PoincarePolynomial> loc = all_local_poincare(p);
    for (int e = 0; e < p.n(); ++e) CHECK(loc[e] == pp({1}));
  }
}

TEST_CASE("local invariant of the cone over a square") {
  Fan f = square_cone_fan();
  FanPoset p = poset_of(f);
  int top = f.cone_by_rays.at({0, 1, 2, 3});
  CHECK(local_poincare(p, top) == pp({1, 1}));
}

TEST_CASE("local invariant of the cone over a cube") {
  Fan f = cube_cone_fan();
  REQUIRE(f.n_cones() == 28);
  FanPoset p = poset_of(f);
  int top = f.cone_by_rays.at({0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(local_poincare(p, top) == pp({1, 4}));
}

TEST_CASE("local invariant of the cone over an octahedron") {
  Fan f = octahedron_cone_fan();
  FanPoset p = poset_of(f);
  int top = f.cone_by_rays.at({0, 1, 2, 3, 4, 5});
  CHECK(local_poincare(p, top) == pp({1, 2}));
}

TEST_CASE("global invariants of complete fans") {
  SECTION("octahedron fan: simplicial, matches the classical h-vector") {
    FanPoset p = poset_of(octahedron_fan());
    PoincarePolynomial g = global_poincare_relative(p);
    CHECK(g == pp({1, 3, 3, 1}));
    CHECK(classical_h_from_f(p) == g);
    CHECK(global_poincare_absolute(p) == g);
  }
  SECTION("cube face fan: non-simplicial, disagrees with the classical count") {
    FanPoset p = poset_of(cube_face_fan());
    PoincarePolynomial g = global_poincare_relative(p);
    CHECK(g == pp({1, 5, 5, 1}));
    CHECK(classical_h_from_f(p) == pp({1, -1, 5, 1}));
  }
  SECTION("polygon fans: 1, m-2, 1") {
    CHECK(global_poincare_relative(poset_of(quadrants4_fan())) == pp({1, 2, 1}));
    CHECK(global_poincare_relative(poset_of(pentagon_fan())) == pp({1, 3, 1}));
  }
}

TEST_CASE("global invariants of fans with boundary") {
  SECTION("half plane") {
    FanPoset p = poset_of(half_plane_fan());
    CHECK(global_poincare_relative(p) == pp({0, 1, 1}));
    CHECK(global_poincare_absolute(p) == pp({1, 1}));
  }
  SECTION("single quadrant") {
    FanPoset p = poset_of(quadrant_fan());
    CHECK(global_poincare_relative(p) == pp({0, 0, 1}));
    CHECK(global_poincare_absolute(p) == pp({1}));
  }
  SECTION("square cone fan: the fan of one cone inherits its local invariant") {
    FanPoset p = poset_of(square_cone_fan());
    CHECK(global_poincare_relative(p) == pp({0, 0, 1, 1}));
    CHECK(global_poincare_absolute(p) == pp({1, 1}));
  }
}

TEST_CASE("duality report") {
  SECTION("complete fans are palindromic") {
    for (Fan f : {quadrants4_fan(), octahedron_fan(), cube_face_fan()}) {
      DualityReport r = duality_check(poset_of(f));
      CHECK(r.ok);
      CHECK(r.complete);
      CHECK(r.failures.empty());
    }
  }
  SECTION("quasi-convex fans with boundary pass") {
    for (Fan f : {half_plane_fan(), quadrant_fan(), square_cone_fan()}) {
      DualityReport r = duality_check(poset_of(f));
      CHECK(r.ok);
      CHECK_FALSE(r.complete);
    }
  }
  SECTION("a fan with a disconnected link fails") {
    DualityReport r = duality_check(poset_of(opposite_quadrants_fan()));
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.failures.empty());
  }
}

TEST_CASE("face pair inequality") {
  SECTION("whole posets") {
    for (Fan f : {octahedron_fan(), cube_face_fan(), square_cone_fan()}) {
      KalaiReport r = kalai_check(poset_of(f));
      CHECK(r.ok);
      CHECK(r.violations.empty());
      CHECK(r.pairs_checked > 0);
    }
    KalaiReport big = kalai_check(poset_of(cube_cone_fan()));
    CHECK(big.ok);
  }
  SECTION("interval invariants behave like vertex figures") {
    Fan f = cube_cone_fan();
    FanPoset p = poset_of(f);
    int top = f.cone_by_rays.at({0, 1, 2, 3, 4, 5, 6, 7});
    int ray = f.cone_by_rays.at({0});
    int o = f.cone_by_rays.at({});
    auto interval_p = [&](int a, int b) {
      FanPoset iv = interval_poset(p, a, b);
      int t = -1;
      for (int e = 0; e < iv.n(); ++e)
        if (iv.dims[e] == iv.top_dim) t = e;
      return local_poincare(iv, t);
    };
    CHECK(interval_p(o, top) == pp({1, 4}));
    CHECK(interval_p(ray, top) == pp({1}));  // corner of a cube is simple
  }
}

TEST_CASE("series expansion against the free module it counts") {
  // (1 + t^2) / (1 - t^2)^3 counts squares
  std::vector<long long> s = poincare_series(pp({1, 1}), 3, 5);
  REQUIRE(s.size() == 6);
  for (int q = 0; q <= 5; ++q) CHECK(s[q] == (q + 1LL) * (q + 1LL));
  // 1 / (1 - t^2)^2 counts q + 1
  std::vector<long long> r = poincare_series(pp({1}), 2, 4);
  for (int q = 0; q <= 4; ++q) CHECK(r[q] == q + 1);
}
