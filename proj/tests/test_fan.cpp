#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "fanih/fan.hpp"

using namespace fanih;

namespace {

std::vector<FieldScalar> vec(std::initializer_list<long long> v) {
  std::vector<FieldScalar> out;
  for (long long x : v) out.emplace_back(x);
  return out;
}

Fan quadrant_fan() {
  return build_fan(2, {vec({1, 0}), vec({0, 1})}, {{0, 1}});
}

Fan cube_face_fan() {
  std::vector<std::vector<FieldScalar>> rays;
  for (long long x : {1, -1})
    for (long long y : {1, -1})
      for (long long z : {1, -1}) rays.push_back(vec({x, y, z}));
  // ray index = 4*(x<0) + 2*(y<0) + (z<0)
  std::vector<std::vector<int>> cones = {
      {0, 1, 2, 3}, {4, 5, 6, 7},  // x = +1, x = -1
      {0, 1, 4, 5}, {2, 3, 6, 7},  // y = +1, y = -1
      {0, 2, 4, 6}, {1, 3, 5, 7},  // z = +1, z = -1
  };
  return build_fan(3, rays, cones);
}

Fan octahedron_fan() {
  std::vector<std::vector<FieldScalar>> rays = {vec({1, 0, 0}),  vec({-1, 0, 0}),
                                                vec({0, 1, 0}),  vec({0, -1, 0}),
                                                vec({0, 0, 1}),  vec({0, 0, -1})};
  std::vector<std::vector<int>> cones;
  for (int x : {0, 1})
    for (int y : {2, 3})
      for (int z : {4, 5}) cones.push_back({x, y, z});
  return build_fan(3, rays, cones);
}

Fan half_plane_fan() {
  return build_fan(2, {vec({1, 0}), vec({0, 1}), vec({-1, 0})}, {{0, 1}, {1, 2}});
}

Fan square_cone_fan() {
  return build_fan(3,
                   {vec({1, 1, 1}), vec({1, -1, 1}), vec({-1, 1, 1}), vec({-1, -1, 1})},
                   {{0, 1, 2, 3}});
}

void check_delta_squared_zero(const Fan& f) {
  for (const Cone& s : f.cones) {
    std::map<int, int> acc;
    for (size_t i = 0; i < f.facets_of[s.id].size(); ++i) {
      int tau = f.facets_of[s.id][i];
      int o1 = f.facet_orientation[s.id][i];
      for (size_t j = 0; j < f.facets_of[tau].size(); ++j)
        acc[f.facets_of[tau][j]] += o1 * f.facet_orientation[tau][j];
    }
    for (const auto& [rho, sum] : acc) {
      INFO("cone " << s.id << " double face " << rho);
      CHECK(sum == 0);
    }
  }
}

}  // namespace

TEST_CASE("face closure of a single quadrant") {
  Fan f = quadrant_fan();
  REQUIRE(f.n_cones() == 4);
  CHECK(f.cones_of_dim(0).size() == 1);
  CHECK(f.cones_of_dim(1).size() == 2);
  CHECK(f.cones_of_dim(2).size() == 1);
  int top = f.cones_of_dim(2)[0];
  CHECK(f.facets_of[top].size() == 2);
  CHECK(is_simplicial(f));
  CHECK_FALSE(is_complete(f));
  // deterministic ids: sorted by dimension then ray list
  CHECK(f.cone(0).rays.empty());
  CHECK(f.cone(1).rays == std::vector<int>{0});
  CHECK(f.cone(2).rays == std::vector<int>{1});
  CHECK(f.cone(3).rays == (std::vector<int>{0, 1}));
}

TEST_CASE("cube face fan closure and completeness") {
  Fan f = cube_face_fan();
  CHECK(f.n_cones() == 27);  // 1 + 8 + 12 + 6
  CHECK(f.cones_of_dim(1).size() == 8);
  CHECK(f.cones_of_dim(2).size() == 12);
  CHECK(f.cones_of_dim(3).size() == 6);
  CHECK(is_complete(f));
  CHECK_FALSE(is_simplicial(f));
  for (const Cone& c : f.cones) CHECK_FALSE(f.in_boundary[c.id]);
  CHECK(facet_connected_components(f).size() == 1);
  check_delta_squared_zero(f);
}

TEST_CASE("octahedron fan is complete and simplicial") {
  Fan f = octahedron_fan();
  CHECK(f.n_cones() == 27);  // 1 + 6 + 12 + 8
  CHECK(is_complete(f));
  CHECK(is_simplicial(f));
  check_delta_squared_zero(f);
}

TEST_CASE("one-dimensional complete fan") {
  Fan f = build_fan(1, {vec({1}), vec({-1})}, {{0}, {1}});
  CHECK(f.n_cones() == 3);
  CHECK(is_complete(f));
}

TEST_CASE("fan axioms are verified") {
  // overlapping cones without shared rays
  CHECK_THROWS_AS(build_fan(2,
                            {vec({1, 0}), vec({0, 1}), vec({1, 1}), vec({1, -1})},
                            {{0, 1}, {2, 3}}),
                  FanError);
  // one cone swallowed by another
  CHECK_THROWS_AS(build_fan(2, {vec({1, 0}), vec({0, 1}), vec({1, -1})},
                            {{0, 1}, {1, 2}}),
                  FanError);
  // duplicate ray up to positive scale
  CHECK_THROWS_AS(build_fan(2, {vec({1, 0}), vec({2, 0})}, {{0}, {1}}), FanError);
  // zero ray
  CHECK_THROWS_AS(build_fan(2, {vec({0, 0})}, {{0}}), FanError);
  // redundant generator
  CHECK_THROWS_AS(build_fan(2, {vec({1, 0}), vec({1, 1}), vec({0, 1})}, {{0, 1, 2}}),
                  FanError);
  // not strictly convex
  CHECK_THROWS_AS(build_fan(2, {vec({1, 0}), vec({-1, 0})}, {{0, 1}}), FanError);
  CHECK_THROWS_AS(build_fan(2, {vec({1, 0}), vec({-1, 1}), vec({-1, -1})}, {{0, 1, 2}}),
                  FanError);
  // opposite rays in separate cones are fine
  CHECK_NOTHROW(build_fan(2, {vec({1, 0}), vec({-1, 0})}, {{0}, {1}}));
}

TEST_CASE("incidence signs compose to zero") {
  check_delta_squared_zero(quadrant_fan());
  check_delta_squared_zero(half_plane_fan());
  check_delta_squared_zero(square_cone_fan());
  Fan prism = build_fan(
      3,
      {vec({1, 0, 1}), vec({1, 0, -1}), vec({0, 1, 1}), vec({0, 1, -1}),
       vec({-1, -1, 1}), vec({-1, -1, -1})},
      {{0, 1, 2, 3}, {2, 3, 4, 5}, {0, 1, 4, 5}});
  check_delta_squared_zero(prism);
}

TEST_CASE("boundary subfan and skeleton") {
  Fan f = half_plane_fan();
  REQUIRE(f.pure);
  CHECK_FALSE(is_complete(f));
  Fan b = boundary_fan(f);
  CHECK(b.n_cones() == 3);  // the two outer rays and the zero cone
  CHECK(b.fan_dim == 1);

  Fan sq = square_cone_fan();
  Fan bsq = boundary_fan(sq);
  CHECK(bsq.n_cones() == 9);  // zero + 4 rays + 4 walls
  CHECK(bsq.fan_dim == 2);
  CHECK(bsq.pure);
  Fan skel = skeleton(sq, 1);
  CHECK(skel.n_cones() == 5);
}

TEST_CASE("star membership") {
  Fan f = half_plane_fan();
  int middle_ray = f.cone_by_rays.at({1});
  auto st = star(f, middle_ray);
  CHECK(st.size() == 3);  // the ray and both half-plane pieces
  int zero = f.cone_by_rays.at({});
  CHECK(star(f, zero).size() == static_cast<size_t>(f.n_cones()));
}

TEST_CASE("transversal fan of a vertex ray in the cube fan") {
  Fan f = cube_face_fan();
  int ray = f.cone_by_rays.at({0});
  TransversalFan t = transversal_fan(f, ray);
  CHECK(t.fan.ambient_dim == 2);
  CHECK(t.fan.n_cones() == 7);  // zero + 3 rays + 3 two-cones
  CHECK(is_complete(t.fan));
  CHECK(t.cone_map.at(ray) == t.fan.cone_by_rays.at({}));
}

TEST_CASE("transversal fan of a wall and of a top cone") {
  Fan f = octahedron_fan();
  int wall = -1, top = -1;
  for (const Cone& c : f.cones) {
    if (c.dim == 2 && wall < 0) wall = c.id;
    if (c.dim == 3 && top < 0) top = c.id;
  }
  TransversalFan tw = transversal_fan(f, wall);
  CHECK(tw.fan.ambient_dim == 1);
  CHECK(tw.fan.n_cones() == 3);
  CHECK(is_complete(tw.fan));
  TransversalFan tt = transversal_fan(f, top);
  CHECK(tt.fan.ambient_dim == 0);
  CHECK(tt.fan.n_cones() == 1);
  CHECK(is_complete(tt.fan));
}

TEST_CASE("flattened boundary of the square cone") {
  Fan f = square_cone_fan();
  int top = f.cones_of_dim(3)[0];
  FlattenedBoundary fb = flattened_boundary_fan(f, top);
  CHECK(fb.fan.ambient_dim == 2);
  CHECK(fb.fan.n_cones() == 9);
  CHECK(is_complete(fb.fan));
  // poset isomorphism preserves dimensions
  for (const auto& [old_id, new_id] : fb.cone_map)
    CHECK(f.cone(old_id).dim == fb.fan.cone(new_id).dim);
  std::string why;
  CHECK(pl_strictly_convex(fb.fan, fb.support, &why));
}

TEST_CASE("flattened boundary of a simplicial cone") {
  Fan f = build_fan(3, {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}, {{0, 1, 2}});
  int top = f.cones_of_dim(3)[0];
  FlattenedBoundary fb = flattened_boundary_fan(f, top);
  CHECK(fb.fan.n_cones() == 7);
  CHECK(is_complete(fb.fan));
  std::string why;
  CHECK(pl_strictly_convex(fb.fan, fb.support, &why));
}

TEST_CASE("sheared square cone over a quadratic field") {
  // shear (x, y, z) -> (x + sqrt(5) y, y, z) applied to the square cone rays
  FieldScalar s5 = FieldScalar::quadratic(Rational(0), Rational(1), 5);
  auto shear = [&](long long x, long long y, long long z) {
    return std::vector<FieldScalar>{FieldScalar(x) + s5 * FieldScalar(y), FieldScalar(y),
                                    FieldScalar(z)};
  };
  Fan f = build_fan(3, {shear(1, 1, 1), shear(1, -1, 1), shear(-1, 1, 1), shear(-1, -1, 1)},
                    {{0, 1, 2, 3}});
  CHECK(f.radicand == 5);
  CHECK(f.n_cones() == 10);
  CHECK_FALSE(is_simplicial(f));
  check_delta_squared_zero(f);

  Fan rational = square_cone_fan();
  FanPoset a = poset_of(f), b = poset_of(rational);
  REQUIRE(a.n() == b.n());
  CHECK(a.dims == b.dims);
  CHECK(a.atom_count == b.atom_count);
}

TEST_CASE("poset extraction and intervals") {
  Fan f = square_cone_fan();
  FanPoset p = poset_of(f);
  CHECK(p.top_dim == 3);
  CHECK(p.pure);
  int top = f.cones_of_dim(3)[0];
  CHECK(p.atom_count[top] == 4);
  CHECK(p.proper_faces(top).size() == 9);
  int zero = f.cone_by_rays.at({});
  CHECK_FALSE(p.boundary[top]);
  CHECK(p.boundary[zero]);

  FanPoset whole = interval_poset(p, zero, top);
  CHECK(whole.top_dim == 3);
  CHECK(whole.n() == 10);
  int ray = f.cone_by_rays.at({0});
  FanPoset up = interval_poset(p, ray, top);
  CHECK(up.top_dim == 2);
  CHECK(up.n() == 4);  // ray, two walls, the cone itself
}
