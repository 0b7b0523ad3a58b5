#include "camtopo/geometry.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace camtopo;

namespace {

CameraModel ideal_camera() {
  CameraModel cam;
  cam.camera_id = 0;
  return cam;  // K = I, R = I, t = 0
}

// Oblique camera 6 m up looking at a spot on the ground.
CameraModel oblique_camera(int id = 1) {
  return make_lookat_camera(id, {2.0, -8.0, 6.0}, {3.0, 1.0, 0.0}, 900.0,
                            640.0, 360.0);
}

CameraModel random_camera(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Vector3d pos(8.0 * u(rng), 8.0 * u(rng), 4.0 + 2.0 * u(rng));
  const Eigen::Vector3d target(3.0 * u(rng), 3.0 * u(rng), 0.0);
  const double focal = 700.0 + 300.0 * u(rng);
  return make_lookat_camera(7, pos, target, focal, 640.0 + 10.0 * u(rng),
                            360.0 + 10.0 * u(rng));
}

oracle::Mat3 to_mat3(const Eigen::Matrix3d& m) {
  oracle::Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = m(i, j);
  return out;
}

}  // namespace

TEST_CASE("projection_matrix identity case") {
  const CameraModel cam = ideal_camera();
  const auto p = projection_matrix(cam);
  CHECK(p.leftCols<3>().isApprox(Eigen::Matrix3d::Identity(), 1e-15));
  CHECK(p.col(3).norm() == doctest::Approx(0.0));
}

TEST_CASE("projection_matrix is linear in t through scale") {
  CameraModel cam = oblique_camera();
  CameraModel doubled = cam;
  doubled.translation *= 2.0;
  cam.scale = 2.0;
  CHECK(projection_matrix(cam).isApprox(projection_matrix(doubled), 1e-12));
}

TEST_CASE("projection_matrix matches the independent multiply oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    CameraModel cam = random_camera(rng);
    cam.scale = 0.5 + trial * 0.1;
    const auto p = projection_matrix(cam);
    const auto ref = oracle::projection_matrix(
        to_mat3(cam.intrinsics), to_mat3(cam.rotation),
        {cam.translation.x(), cam.translation.y(), cam.translation.z()},
        cam.scale);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(p(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-12));
  }
}

TEST_CASE("project: optical axis and similar triangles") {
  const CameraModel cam = ideal_camera();
  const Pixel axis = project(cam, {0.0, 0.0, 1.0});
  CHECK(axis.u == doctest::Approx(0.0));
  CHECK(axis.v == doctest::Approx(0.0));

  const Pixel off = project(cam, {1.0, 0.0, 2.0});
  CHECK(off.u == doctest::Approx(0.5));
  CHECK(off.v == doctest::Approx(0.0));
}

TEST_CASE("project matches brute-force homogeneous arithmetic") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const CameraModel cam = random_camera(rng);
    const Eigen::Vector3d x(u(rng), u(rng), std::abs(u(rng)) * 0.3);
    const auto p = projection_matrix(cam);
    oracle::Mat34 pref{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) pref[i][j] = p(i, j);
    const auto expect = oracle::project(pref, {x.x(), x.y(), x.z()});
    const Pixel got = project(cam, x);
    CHECK(got.u == doctest::Approx(expect[0]).epsilon(1e-12));
    CHECK(got.v == doctest::Approx(expect[1]).epsilon(1e-12));
  }
}

TEST_CASE("project throws on the principal plane") {
  const CameraModel cam = ideal_camera();
  CHECK_THROWS_AS(project(cam, {1.0, 1.0, 0.0}), Error);
  try {
    project(cam, {1.0, 1.0, 0.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateProjection);
  }
}

TEST_CASE("project is homogeneous-invariant in the matrix") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const CameraModel cam = oblique_camera();
  const auto p = projection_matrix(cam);
  for (double lambda : {0.25, -3.0, 17.0}) {
    oracle::Mat34 scaled{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) scaled[i][j] = lambda * p(i, j);
    for (int trial = 0; trial < 10; ++trial) {
      const std::array<double, 3> x{u(rng), u(rng), 0.0};
      oracle::Mat34 plain{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) plain[i][j] = p(i, j);
      const auto a = oracle::project(plain, x);
      const auto b = oracle::project(scaled, x);
      CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-12));
      CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-12));
    }
  }
}

TEST_CASE("back_project_ground: nadir view maps principal point to origin") {
  const CameraModel cam =
      make_lookat_camera(2, {0.0, 0.0, 5.0}, {0.0, 0.0, 0.0}, 800.0, 640.0,
                         360.0);
  const GroundPoint g = back_project_ground(cam, {640.0, 360.0});
  CHECK(g.x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(g.y == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("back_project_ground round-trips project") {
  const CameraModel cam = oblique_camera();
  const Eigen::Vector3d world(3.2, -1.7, 0.0);
  const Pixel px = project(cam, world);
  const GroundPoint g = back_project_ground(cam, px);
  CHECK(g.x == doctest::Approx(3.2).epsilon(1e-6));
  CHECK(g.y == doctest::Approx(-1.7).epsilon(1e-6));
}

TEST_CASE("round-trip sweep over random ground points stays under 1e-6 m") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  const CameraModel cam = oblique_camera();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = 3.0 + u(rng);
    const double y = 1.0 + u(rng);
    const Pixel px = project(cam, {x, y, 0.0});
    const GroundPoint g = back_project_ground(cam, px);
    worst = std::max(worst, std::hypot(g.x - x, g.y - y));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("back_project_ground error paths") {
  // Horizontal camera: ray through the principal point never meets Z = 0.
  const CameraModel level =
      make_lookat_camera(3, {0.0, 0.0, 2.0}, {10.0, 0.0, 2.0}, 800.0, 640.0,
                         360.0);
  try {
    back_project_ground(level, {640.0, 360.0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RayParallelToGround);
  }

  // Pixel above the horizon: the ground intersection is behind the camera.
  try {
    back_project_ground(level, {640.0, 100.0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PointBehindCamera);
  }
}

TEST_CASE("measure_height: degenerate foot == head") {
  const CameraModel cam = oblique_camera();
  const Pixel foot = project(cam, {4.0, 2.0, 0.0});
  try {
    measure_height(cam, foot, foot);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveHeight);
  }
}

TEST_CASE("measure_height recovers a forward-projected 1.80 m segment") {
  const CameraModel cam = oblique_camera();
  const Pixel foot = project(cam, {4.0, 2.0, 0.0});
  const Pixel head = project(cam, {4.0, 2.0, 1.80});
  CHECK(measure_height(cam, foot, head) == doctest::Approx(1.80).epsilon(1e-6));

  // Swapped foot/head reads as a negative height.
  try {
    measure_height(cam, head, foot);
    CHECK(false);
  } catch (const Error& e) {
    const bool expected = e.kind() == ErrorKind::NonPositiveHeight ||
                          e.kind() == ErrorKind::PointBehindCamera;
    CHECK(expected);
  }
}

TEST_CASE("measured height follows the translation scale") {
  CameraModel cam = oblique_camera();
  const Pixel foot = project(cam, {4.0, 2.0, 0.0});
  const Pixel head = project(cam, {4.0, 2.0, 1.80});
  cam.scale = 0.5;
  CHECK(measure_height(cam, foot, head) == doctest::Approx(0.90).epsilon(1e-6));
}

TEST_CASE("scale covariance of back-projection and height") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (double alpha : {0.5, 2.0, 10.0}) {
    CameraModel cam = oblique_camera();
    const Pixel foot = project(cam, {3.0 + u(rng), 1.0 + u(rng), 0.0});
    const Pixel head_src = project(cam, {1.0, 0.5, 1.6});
    const GroundPoint base = back_project_ground(cam, foot);
    const double h_base =
        measure_height(cam, project(cam, {1.0, 0.5, 0.0}), head_src);

    CameraModel scaled = cam;
    scaled.scale = alpha;
    const GroundPoint g = back_project_ground(scaled, foot);
    CHECK(g.x == doctest::Approx(alpha * base.x).epsilon(1e-9));
    CHECK(g.y == doctest::Approx(alpha * base.y).epsilon(1e-9));

    const double h =
        measure_height(scaled, project(cam, {1.0, 0.5, 0.0}), head_src);
    CHECK(h == doctest::Approx(alpha * h_base).epsilon(1e-9));
  }
}

TEST_CASE("camera validation rejects malformed models") {
  CameraModel cam = ideal_camera();
  cam.rotation(0, 1) = 0.5;
  CHECK_THROWS_AS(cam.validate(), Error);

  CameraModel bad_k = ideal_camera();
  bad_k.intrinsics(1, 0) = 2.0;
  CHECK_THROWS_AS(bad_k.validate(), Error);

  CameraModel bad_scale = ideal_camera();
  bad_scale.scale = 0.0;
  CHECK_THROWS_AS(bad_scale.validate(), Error);
}
