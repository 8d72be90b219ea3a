#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cstdint>
#include <vector>

#include "repose/errors.hpp"

namespace repose {

constexpr double kOrthonormalTol = 1e-9;

/// Rigid pose in 3-D space. Rotation is stored as a full matrix so that
/// node hashing never has to disambiguate angle wraparound; angle views
/// are derived on demand.
class Transform {
 public:
  Transform() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

  /// Validates orthonormality (R^T R = I and det R = +1, both to 1e-9).
  Transform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static Transform identity() { return Transform(); }
  static Transform from_translation(const Eigen::Vector3d& t);
  static Transform rot_x(double angle_rad);
  static Transform rot_y(double angle_rad);
  static Transform rot_z(double angle_rad);
  static Transform from_axis_angle(const Eigen::Vector3d& axis, double angle_rad,
                                   const Eigen::Vector3d& translation = Eigen::Vector3d::Zero());

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& point) const {
    return rotation_ * point + translation_;
  }
  Eigen::Vector3d rotate(const Eigen::Vector3d& direction) const { return rotation_ * direction; }

  Eigen::Vector3d x_axis() const { return rotation_.col(0); }
  Eigen::Vector3d y_axis() const { return rotation_.col(1); }
  Eigen::Vector3d z_axis() const { return rotation_.col(2); }

  Transform inverse() const;

  bool approx_equal(const Transform& other, double lin_tol = 1e-9, double ang_tol = 1e-9) const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// Rigid composition: apply `b`, then `a`.
Transform compose(const Transform& a, const Transform& b);

inline Transform operator*(const Transform& a, const Transform& b) { return compose(a, b); }

/// Rotates `pose` rigidly about the line through `point` along `axis`.
/// The image of `point` under the motion is `point` itself.
/// Throws NonUnitAxis if the axis norm deviates from 1 beyond 1e-6.
Transform rotate_about_point(const Transform& pose, const Eigen::Vector3d& point,
                             const Eigen::Vector3d& axis, double angle_rad);

/// Quantized pose identity used for graph-node bucketing: translations
/// snap to 1e-4 m, rotations to 1e-3 rad (via the sign-canonicalized
/// unit quaternion), so equal poses built through different operation
/// orders land in the same bucket.
struct PoseKey {
  std::int64_t q[7];

  bool operator==(const PoseKey& other) const;
  bool operator<(const PoseKey& other) const;
};

PoseKey pose_key(const Transform& pose);

struct PoseKeyHash {
  std::size_t operator()(const PoseKey& k) const;
};

struct SupportSurface {
  Transform origin;  // surface frame, Z up; origin sits at a corner
  double extent_x = 0.0;
  double extent_y = 0.0;
  double height = 0.0;  // world Z of the plane

  Eigen::Vector3d to_world(double u, double v) const {
    return origin.apply(Eigen::Vector3d(u, v, 0.0));
  }
  Eigen::Vector3d to_surface(const Eigen::Vector3d& world) const {
    return origin.inverse().apply(world);
  }

  void validate() const;
};

struct PlacementPoint {
  Eigen::Vector2d position;  // surface frame, meters
  Transform world_transform; // placement frame: surface axes, origin on the plane
};

/// Regular grid over the surface extents, spacing-aligned, anchored at
/// the surface-frame origin corner, enumerated row-major (v rows, u minor).
/// Throws InvalidSpacing if spacing <= 0 or spacing > min extent.
std::vector<PlacementPoint> discretize_surface(const SupportSurface& surface, double spacing);

}  // namespace repose
