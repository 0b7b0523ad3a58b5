#pragma once

#include <Eigen/Dense>

#include "camtopo/errors.hpp"

namespace camtopo {

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

/// Point on the world ground plane (Z = 0), meters.
struct GroundPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Pinhole camera with a correctable translation scale.
///
/// The projection matrix is K [R | scale * t]. `translation` is whatever the
/// calibration reported; `scale` is the per-camera correction estimated by
/// the scale-alignment stage (1 until then).
struct CameraModel {
  int camera_id = -1;
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  double scale = 1.0;

  // Throws InvalidConfig if R is not orthonormal (1e-9 elementwise), K is not
  // upper-triangular with positive diagonal, or scale <= 0.
  void validate() const;

  // Camera center in world coordinates: -R^T * (scale * t).
  Eigen::Vector3d center() const {
    return -(rotation.transpose() * (scale * translation));
  }
};

/// K [R | scale * t] as a 3x4 matrix.
Eigen::Matrix<double, 3, 4> projection_matrix(const CameraModel& cam);

/// Projects a world point to pixel coordinates.
/// Throws DegenerateProjection when the homogeneous w vanishes (|w| < 1e-12).
Pixel project(const CameraModel& cam, const Eigen::Vector3d& world_point);

/// Intersects the viewing ray of a pixel with the ground plane Z = 0.
/// Throws RayParallelToGround when the unit ray direction has |z| < 1e-9 and
/// PointBehindCamera when the intersection lies behind the camera.
GroundPoint back_project_ground(const CameraModel& cam, const Pixel& pixel);

/// Height of a vertical segment standing at the foot pixel's ground point.
///
/// The foot pixel is back-projected to (X, Y, 0); the head pixel constrains
/// the single unknown Z through the two linear equations of the projection,
/// solved in least squares. Throws NonPositiveHeight when the solution is
/// <= 0 (foot/head swap or detection noise) and RayParallelToGround /
/// PointBehindCamera from the foot back-projection.
double measure_height(const CameraModel& cam, const Pixel& foot_px,
                      const Pixel& head_px);

/// Camera at `position` looking at `target` (world Z up, camera Y down),
/// with focal length in pixels and principal point (cx, cy).
CameraModel make_lookat_camera(int camera_id, const Eigen::Vector3d& position,
                               const Eigen::Vector3d& target, double focal_px,
                               double cx, double cy);

}  // namespace camtopo
