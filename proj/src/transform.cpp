#include "repose/transform.hpp"

#include <cmath>
#include <cstdio>

namespace repose {

namespace {

void check_orthonormal(const Eigen::Matrix3d& r) {
  const double ortho_err = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho_err > kOrthonormalTol) {
    raise(ErrorCode::ValidationError,
          "transform.rotation is not orthonormal (max |R^T R - I| = " + std::to_string(ortho_err) + ")");
  }
  if (std::abs(r.determinant() - 1.0) > kOrthonormalTol) {
    raise(ErrorCode::ValidationError, "transform.rotation determinant differs from +1");
  }
}

// Re-orthonormalizes via quaternion to keep long composition chains
// within the 1e-9 invariant.
Eigen::Matrix3d renormalize(const Eigen::Matrix3d& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace

Transform::Transform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  check_orthonormal(rotation_);
  rotation_ = renormalize(rotation_);
}

Transform Transform::from_translation(const Eigen::Vector3d& t) {
  return Transform(Eigen::Matrix3d::Identity(), t);
}

Transform Transform::rot_x(double angle_rad) {
  return Transform(Eigen::AngleAxisd(angle_rad, Eigen::Vector3d::UnitX()).toRotationMatrix(),
                   Eigen::Vector3d::Zero());
}

Transform Transform::rot_y(double angle_rad) {
  return Transform(Eigen::AngleAxisd(angle_rad, Eigen::Vector3d::UnitY()).toRotationMatrix(),
                   Eigen::Vector3d::Zero());
}

Transform Transform::rot_z(double angle_rad) {
  return Transform(Eigen::AngleAxisd(angle_rad, Eigen::Vector3d::UnitZ()).toRotationMatrix(),
                   Eigen::Vector3d::Zero());
}

Transform Transform::from_axis_angle(const Eigen::Vector3d& axis, double angle_rad,
                                     const Eigen::Vector3d& translation) {
  const double n = axis.norm();
  if (std::abs(n - 1.0) > 1e-6) {
    raise(ErrorCode::NonUnitAxis, "axis norm " + std::to_string(n) + " deviates from 1");
  }
  return Transform(Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix(), translation);
}

Transform Transform::inverse() const {
  Eigen::Matrix3d rt = rotation_.transpose();
  return Transform(rt, -(rt * translation_));
}

bool Transform::approx_equal(const Transform& other, double lin_tol, double ang_tol) const {
  if ((translation_ - other.translation_).norm() > lin_tol) return false;
  Eigen::AngleAxisd delta(rotation_.transpose() * other.rotation_);
  return std::abs(delta.angle()) <= ang_tol;
}

Transform compose(const Transform& a, const Transform& b) {
  return Transform(a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation());
}

Transform rotate_about_point(const Transform& pose, const Eigen::Vector3d& point,
                             const Eigen::Vector3d& axis, double angle_rad) {
  const double n = axis.norm();
  if (std::abs(n - 1.0) > 1e-6) {
    raise(ErrorCode::NonUnitAxis, "axis norm " + std::to_string(n) + " deviates from 1");
  }
  const Eigen::Matrix3d delta = Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix();
  return Transform(delta * pose.rotation(), point + delta * (pose.translation() - point));
}

namespace {

std::int64_t quantize(double value, double step) {
  // The tiny bias keeps values produced along different composition
  // paths from straddling a bucket boundary by one ulp.
  return static_cast<std::int64_t>(std::llround(value / step + 1e-9));
}

}  // namespace

bool PoseKey::operator==(const PoseKey& other) const {
  for (int i = 0; i < 7; ++i) {
    if (q[i] != other.q[i]) return false;
  }
  return true;
}

bool PoseKey::operator<(const PoseKey& other) const {
  for (int i = 0; i < 7; ++i) {
    if (q[i] != other.q[i]) return q[i] < other.q[i];
  }
  return false;
}

PoseKey pose_key(const Transform& pose) {
  constexpr double kLinStep = 1e-4;   // meters
  constexpr double kAngStep = 5e-4;   // quaternion component step ~ 1e-3 rad
  Eigen::Quaterniond quat(pose.rotation());
  quat.normalize();
  // Canonical sign: first component whose quantized value is nonzero is positive.
  double comps[4] = {quat.w(), quat.x(), quat.y(), quat.z()};
  for (double c : comps) {
    const std::int64_t qc = quantize(c, kAngStep);
    if (qc != 0) {
      if (qc < 0) {
        for (double& v : comps) v = -v;
      }
      break;
    }
  }
  PoseKey key{};
  key.q[0] = quantize(pose.translation().x(), kLinStep);
  key.q[1] = quantize(pose.translation().y(), kLinStep);
  key.q[2] = quantize(pose.translation().z(), kLinStep);
  for (int i = 0; i < 4; ++i) key.q[3 + i] = quantize(comps[i], kAngStep);
  return key;
}

std::size_t PoseKeyHash::operator()(const PoseKey& k) const {
  // FNV-1a over the quantized words.
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < 7; ++i) {
    std::uint64_t v = static_cast<std::uint64_t>(k.q[i]);
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return static_cast<std::size_t>(h);
}

void SupportSurface::validate() const {
  if (extent_x <= 0.0) raise(ErrorCode::ValidationError, "surface.extent_x must be > 0");
  if (extent_y <= 0.0) raise(ErrorCode::ValidationError, "surface.extent_y must be > 0");
  if (std::abs(origin.translation().z() - height) > 1e-9) {
    raise(ErrorCode::ValidationError, "surface.origin Z must equal surface.height");
  }
  if ((origin.z_axis() - Eigen::Vector3d::UnitZ()).norm() > 1e-9) {
    raise(ErrorCode::ValidationError, "surface.origin must keep Z up");
  }
}

std::vector<PlacementPoint> discretize_surface(const SupportSurface& surface, double spacing) {
  if (spacing <= 0.0 || spacing > std::min(surface.extent_x, surface.extent_y)) {
    raise(ErrorCode::InvalidSpacing,
          "spacing " + std::to_string(spacing) + " outside (0, min extent]");
  }
  const int nx = static_cast<int>(std::floor(surface.extent_x / spacing + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor(surface.extent_y / spacing + 1e-9)) + 1;
  std::vector<PlacementPoint> points;
  points.reserve(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      PlacementPoint p;
      p.position = Eigen::Vector2d(ix * spacing, iy * spacing);
      p.world_transform =
          compose(surface.origin, Transform::from_translation(
                                      Eigen::Vector3d(p.position.x(), p.position.y(), 0.0)));
      points.push_back(std::move(p));
    }
  }
  return points;
}

}  // namespace repose
