#include "camtopo/geometry.hpp"

#include <cmath>

#include "camtopo/util.hpp"

namespace camtopo {

namespace {
constexpr double kHomogeneousEps = 1e-12;  // |w| below this: point at infinity
constexpr double kRayZEps = 1e-9;          // unit ray z below this: parallel
}  // namespace

void CameraModel::validate() const {
  const Eigen::Matrix3d rtr = rotation.transpose() * rotation;
  const Eigen::Matrix3d delta = rtr - Eigen::Matrix3d::Identity();
  if (delta.cwiseAbs().maxCoeff() > 1e-9) {
    raise(ErrorKind::InvalidConfig,
          strf("camera %d: rotation is not orthonormal", camera_id));
  }
  const auto& k = intrinsics;
  if (std::abs(k(1, 0)) > 1e-12 || std::abs(k(2, 0)) > 1e-12 ||
      std::abs(k(2, 1)) > 1e-12) {
    raise(ErrorKind::InvalidConfig,
          strf("camera %d: intrinsics not upper-triangular", camera_id));
  }
  if (k(0, 0) <= 0.0 || k(1, 1) <= 0.0 || k(2, 2) <= 0.0) {
    raise(ErrorKind::InvalidConfig,
          strf("camera %d: intrinsics diagonal must be positive", camera_id));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    raise(ErrorKind::InvalidConfig,
          strf("camera %d: scale must be positive", camera_id));
  }
}

Eigen::Matrix<double, 3, 4> projection_matrix(const CameraModel& cam) {
  Eigen::Matrix<double, 3, 4> extrinsics;
  extrinsics.leftCols<3>() = cam.rotation;
  extrinsics.col(3) = cam.scale * cam.translation;
  return cam.intrinsics * extrinsics;
}

Pixel project(const CameraModel& cam, const Eigen::Vector3d& world_point) {
  const Eigen::Vector3d x =
      cam.intrinsics * (cam.rotation * world_point + cam.scale * cam.translation);
  if (std::abs(x.z()) < kHomogeneousEps) {
    raise(ErrorKind::DegenerateProjection,
          strf("camera %d: point projects to infinity", cam.camera_id));
  }
  return {x.x() / x.z(), x.y() / x.z()};
}

GroundPoint back_project_ground(const CameraModel& cam, const Pixel& pixel) {
  // Viewing ray: C + lambda * d with d pointing forward (camera z > 0).
  const Eigen::Vector3d dir_cam =
      cam.intrinsics.inverse() * Eigen::Vector3d(pixel.u, pixel.v, 1.0);
  const Eigen::Vector3d dir = (cam.rotation.transpose() * dir_cam).normalized();
  const Eigen::Vector3d center = cam.center();

  if (std::abs(dir.z()) < kRayZEps) {
    raise(ErrorKind::RayParallelToGround,
          strf("camera %d: viewing ray parallel to ground", cam.camera_id));
  }
  const double lambda = -center.z() / dir.z();
  if (lambda <= 0.0) {
    raise(ErrorKind::PointBehindCamera,
          strf("camera %d: ground intersection behind camera", cam.camera_id));
  }
  return {center.x() + lambda * dir.x(), center.y() + lambda * dir.y()};
}

double measure_height(const CameraModel& cam, const Pixel& foot_px,
                      const Pixel& head_px) {
  const GroundPoint g = back_project_ground(cam, foot_px);
  const Eigen::Matrix<double, 3, 4> p = projection_matrix(cam);

  // Projection of (g.x, g.y, Z) is a + Z * b in homogeneous coordinates.
  const Eigen::Vector3d a =
      p.col(0) * g.x + p.col(1) * g.y + p.col(3);
  const Eigen::Vector3d b = p.col(2);

  // head_u * (a2 + Z b2) = a0 + Z b0, and likewise for v: two linear
  // equations c * Z = d, solved in least squares.
  const double c1 = b.x() - head_px.u * b.z();
  const double d1 = head_px.u * a.z() - a.x();
  const double c2 = b.y() - head_px.v * b.z();
  const double d2 = head_px.v * a.z() - a.y();

  const double cc = c1 * c1 + c2 * c2;
  if (cc < 1e-18) {
    raise(ErrorKind::DegenerateProjection,
          strf("camera %d: vertical direction unobservable at this pixel",
               cam.camera_id));
  }
  const double z = (c1 * d1 + c2 * d2) / cc;
  if (!(z > 0.0) || !std::isfinite(z)) {
    raise(ErrorKind::NonPositiveHeight,
          strf("camera %d: measured height %.6f not positive", cam.camera_id,
               z));
  }
  return z;
}

CameraModel make_lookat_camera(int camera_id, const Eigen::Vector3d& position,
                               const Eigen::Vector3d& target, double focal_px,
                               double cx, double cy) {
  const Eigen::Vector3d forward = (target - position).normalized();
  const Eigen::Vector3d up(0.0, 0.0, 1.0);
  Eigen::Vector3d right = forward.cross(up);
  if (right.norm() < 1e-12) {
    right = Eigen::Vector3d(1.0, 0.0, 0.0);  // nadir view
  }
  right.normalize();
  const Eigen::Vector3d down = forward.cross(right);

  CameraModel cam;
  cam.camera_id = camera_id;
  cam.rotation.row(0) = right;
  cam.rotation.row(1) = down;
  cam.rotation.row(2) = forward;
  cam.translation = -(cam.rotation * position);
  cam.intrinsics << focal_px, 0.0, cx, 0.0, focal_px, cy, 0.0, 0.0, 1.0;
  cam.scale = 1.0;
  cam.validate();
  return cam;
}

}  // namespace camtopo
