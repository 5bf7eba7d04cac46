// Copyright 2026 conecert contributors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include "conecert/cones.hpp"
#include "conecert/errors.hpp"
#include "conecert/rng.hpp"

using namespace conecert;

namespace {

ConeSpec one_block(BlockSpec b) { return ConeSpec({b}); }

VecE random_in_cone(const ConeSpec& cone, Rng& rng) {
  return project(cone, VecE(3.0 * rng.normal_vec(cone.dim())));
}

}  // namespace

TEST_CASE("contains: block families") {
  CHECK(contains(one_block(orthant_block(3)), Vec::Zero(3), 0.0));  // apex

  ConeSpec soc = one_block(soc_block(3));
  Vec y(3);
  y << 1.0, 0.6, 0.8;  // boundary: 1 - |(0.6,0.8)| = 0
  CHECK(contains(soc, y, 1e-12));
  y << 1.0, 0.8, 0.8;
  CHECK_FALSE(contains(soc, y, 1e-12));

  ConeSpec psd = one_block(psd_block(2));
  Mat a(2, 2);
  a << 1, 2, 2, 1;  // eigenvalues 3 and -1
  CHECK_FALSE(contains(psd, svec(a), 1e-9));
  a << 2, 1, 1, 2;  // eigenvalues 1 and 3
  CHECK(contains(psd, svec(a), 1e-9));
}

TEST_CASE("contains: layout mismatch throws") {
  CHECK_THROWS_AS(contains(one_block(orthant_block(3)), Vec::Zero(2), 0.0),
                  DimensionError);
}

TEST_CASE("interior_point: canonical elements") {
  CHECK(interior_point(one_block(orthant_block(2))) == Vec::Ones(2));
  Vec e = interior_point(one_block(soc_block(3)));
  CHECK(e[0] == 1.0);
  CHECK(e.tail(2).norm() == 0.0);
  ConeSpec psd = one_block(psd_block(2));
  CHECK((psd.psd_matrix(interior_point(psd), 0) - Mat::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("project: closed forms") {
  Vec y(2);
  y << -1, 2;
  Vec clamped(2);
  clamped << 0, 2;
  CHECK((project(one_block(orthant_block(2)), y) - clamped).norm() == 0.0);

  ConeSpec soc = one_block(soc_block(2));
  y << -5, 0;  // polar cone: projects to the apex
  CHECK(project(soc, y).norm() == 0.0);

  ConeSpec psd = one_block(psd_block(2));
  Mat a(2, 2);
  a << 1, 2, 2, 1;
  Mat expect(2, 2);
  expect << 1.5, 1.5, 1.5, 1.5;  // clamp the -1 eigenvalue in basis (1,+-1)/sqrt2
  CHECK((psd.psd_matrix(project(psd, svec(a)), 0) - expect).norm() < 1e-12);
}

TEST_CASE("polar_contains: self-dual families") {
  Vec y(2);
  y << -1, -3;
  CHECK(polar_contains(one_block(orthant_block(2)), y, 0.0));
  Vec s(3);
  s << 1, 0, 0;
  CHECK_FALSE(polar_contains(one_block(soc_block(3)), s, 1e-12));
  ConeSpec psd = one_block(psd_block(2));
  CHECK(polar_contains(psd, svec(Mat(-Mat::Identity(2, 2))), 1e-12));
}

TEST_CASE("activity: per-block records") {
  Vec y(3);
  y << 0, 2, 0;
  Activity act = activity(one_block(orthant_block(3)), y, 1e-8);
  CHECK(act.blocks[0].active_coords == std::vector<int>{0, 2});

  y << 5, 3, 4;
  act = activity(one_block(soc_block(3)), y, 1e-8);
  CHECK(act.blocks[0].soc_tag == SocActivity::kBoundaryRay);
  CHECK(act.blocks[0].ray_tail[0] == doctest::Approx(0.6));
  CHECK(act.blocks[0].ray_tail[1] == doctest::Approx(0.8));

  ConeSpec psd = one_block(psd_block(2));
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 2;
  act = activity(psd, svec(a), 1e-8);
  CHECK(act.blocks[0].psd_rank == 1);
  CHECK(std::abs(act.blocks[0].kernel_basis(1, 0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(activity(one_block(orthant_block(1)), Vec::Constant(1, -1.0), 1e-8),
                  PreconditionError);
}

TEST_CASE("property: self-duality on 1000 seeded points per family") {
  std::vector<ConeSpec> cones = {one_block(orthant_block(4)), one_block(soc_block(4)),
                                 one_block(psd_block(3))};
  for (const ConeSpec& cone : cones) {
    Rng rng(2026, "self-dual");
    for (int i = 0; i < 1000; ++i) {
      VecE y = 2.0 * rng.normal_vec(cone.dim());
      CHECK(polar_contains(cone, y, 1e-10) == contains(cone, VecE(-y), 1e-10));
    }
  }
}

TEST_CASE("property: projection variational inequality") {
  ConeSpec cone(
      {orthant_block(2), soc_block(3), psd_block(2)});
  Rng rng(7, "variational");
  const VecE y = 4.0 * rng.normal_vec(cone.dim());
  const VecE py = project(cone, y);
  for (int i = 0; i < 100; ++i) {
    const VecE z = random_in_cone(cone, rng);
    CHECK((y - py).dot(z - py) <= 1e-9);
  }
  // idempotent and nonexpansive
  CHECK((project(cone, py) - py).norm() < 1e-12);
  const VecE y2 = 4.0 * rng.normal_vec(cone.dim());
  CHECK((project(cone, y2) - py).norm() <= (y2 - y).norm() + 1e-12);
}

TEST_CASE("property: Moreau decomposition") {
  ConeSpec cone({soc_block(4), psd_block(3), orthant_block(2)});
  Rng rng(11, "moreau");
  for (int i = 0; i < 50; ++i) {
    const VecE y = 3.0 * rng.normal_vec(cone.dim());
    const VecE p = project(cone, y);
    const VecE q = y - p;               // should be the polar projection
    CHECK(polar_contains(cone, q, 1e-9));
    CHECK(std::abs(p.dot(q)) < 1e-10);
  }
}

TEST_CASE("property: activity is stable under small feasible perturbation") {
  ConeSpec cone({orthant_block(3), psd_block(2)});
  VecE y = VecE::Zero(cone.dim());
  Vec ob(3);
  ob << 0.0, 2.0, 0.0;
  cone.set_block(y, 0, ob);
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 2.0;
  cone.set_block(y, 1, svec(a));
  const double tol = 1e-8;
  Activity base = activity(cone, y, tol);

  Rng rng(3, "act-stable");
  for (int i = 0; i < 20; ++i) {
    VecE delta = VecE::Zero(cone.dim());
    Vec od(3);
    od << 0.0, rng.uniform(-1, 1), 0.0;  // stay inside the cone
    cone.set_block(delta, 0, od);
    Mat da = Mat::Zero(2, 2);
    da(0, 0) = rng.uniform(-1, 1);
    cone.set_block(delta, 1, svec(da));
    VecE yp = y + (tol / 10.0) * delta / std::max(1.0, delta.norm());
    Activity pert = activity(cone, yp, tol);
    CHECK(pert.blocks[0].active_coords == base.blocks[0].active_coords);
    CHECK(pert.blocks[1].psd_rank == base.blocks[1].psd_rank);
  }
}

TEST_CASE("soc(1) collapses to orthant(1)") {
  ConeSpec cone = one_block(soc_block(1));
  CHECK(cone.block(0).kind == ConeKind::kOrthant);
}

TEST_CASE("tangent cone membership through activity") {
  ConeSpec cone = one_block(soc_block(3));
  Vec y(3);
  y << 5, 3, 4;
  Activity act = activity(cone, y, 1e-8);
  Vec u(3);
  u << 1.0, 0.6, 0.8;  // along the ray: tangent
  CHECK(tangent_contains(cone, y, act, u, 1e-10));
  u << 0.0, 0.6, 0.8;  // u1 < <w, u_tail> = 1: outside
  CHECK_FALSE(tangent_contains(cone, y, act, u, 1e-10));
}
