#include "repose/droop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace repose {

namespace {
constexpr double kHalfPi = M_PI / 2.0;
}

void GraspState::validate() const {
  if (theta < -1e-12 || theta > kHalfPi + 1e-12) {
    raise(ErrorCode::ValidationError, "grasp state theta outside [0, pi/2]");
  }
  if (phi < -1e-12 || phi > M_PI + 1e-12) {
    raise(ErrorCode::ValidationError, "grasp state phi outside [0, pi]");
  }
  if (r_com < 0.0) raise(ErrorCode::ValidationError, "grasp state r_com must be >= 0");
}

void TransitionCommand::validate() const {
  if (distance < 0.0) raise(ErrorCode::ValidationError, "transition distance must be >= 0");
  if (theta_init < -1e-12) raise(ErrorCode::ValidationError, "transition theta_init must be >= 0");
  const double theta_end = direction == TransitionDirection::Up ? theta_init + theta_target
                                                                : theta_init - theta_target;
  if (theta_end < -1e-9 || theta_end > kHalfPi + 1e-9) {
    raise(ErrorCode::ValidationError, "transition leaves the [0, pi/2] inclination range");
  }
}

double gravity_torque(const Scene& scene, const GraspState& gs) {
  const double mg_half = scene.object.mass * scene.gravity / 2.0;
  const double s_theta = std::sin(gs.theta);
  const double s_phi = std::sin(gs.phi);
  const double c_phi = std::cos(gs.phi);
  return mg_half * s_theta * s_phi * (gs.r_com * s_phi) +
         mg_half * s_theta * c_phi * (scene.gripper.ee_length + gs.r_com * c_phi);
}

double gravity_torque_dtheta(const Scene& scene, const GraspState& gs) {
  const double mg_half = scene.object.mass * scene.gravity / 2.0;
  const double c_theta = std::cos(gs.theta);
  const double s_phi = std::sin(gs.phi);
  const double c_phi = std::cos(gs.phi);
  return mg_half * c_theta * s_phi * (gs.r_com * s_phi) +
         mg_half * c_theta * c_phi * (scene.gripper.ee_length + gs.r_com * c_phi);
}

bool droop_occurs(const Scene& scene, const GraspState& gs) {
  return gravity_torque(scene, gs) > scene.friction_torque_limit();
}

double droop_threshold_theta(const Scene& scene, double phi, double r_com) {
  // T_g = (mg/2) sin(theta) (r_com + ee cos(phi)); solve for equality.
  const double mg_half = scene.object.mass * scene.gravity / 2.0;
  const double lever = r_com + scene.gripper.ee_length * std::cos(phi);
  const double peak = mg_half * lever;
  const double limit = scene.friction_torque_limit();
  if (peak <= limit) return kHalfPi + 1.0;
  if (limit <= 0.0) return 0.0;
  return std::asin(limit / peak);
}

double transition_distance_up(double l_stick, double theta_init, double theta_target) {
  if (theta_init < -1e-12 || theta_target < -1e-12 || theta_init + theta_target > kHalfPi + 1e-9) {
    raise(ErrorCode::AngleOutOfRange, "upward transition leaves [0, pi/2]");
  }
  return l_stick * (std::sin(theta_init + theta_target) - std::sin(theta_init));
}

double transition_distance_down(double l_stick, double theta_init, double theta_target) {
  if (theta_target < -1e-12 || theta_init > kHalfPi + 1e-9 ||
      theta_init - theta_target < -1e-12) {
    raise(ErrorCode::AngleOutOfRange, "downward transition leaves [0, pi/2]");
  }
  return l_stick * (std::sin(theta_init) - std::sin(theta_init - theta_target));
}

double gripper_load_share(const Scene& scene, const Transform& object_pose,
                          double grasp_point_on_object) {
  if (grasp_point_on_object <= 1e-6) {
    raise(ErrorCode::DegenerateGrasp, "grasp point coincides with the contact pivot");
  }
  const double weight = scene.object.mass * scene.gravity;
  if (fully_supported(scene, object_pose)) {
    return 0.0;  // surface carries everything while the object rests flat
  }

  // Contact set: every skeleton vertex at the minimal height. A stick
  // pivots on a point, a board on its bottom edge; the moment balance
  // runs about that point or line.
  std::vector<Eigen::Vector3d> lowest;
  double min_z = std::numeric_limits<double>::infinity();
  for (const Eigen::Vector3d& p : scene.object.contact_points()) {
    min_z = std::min(min_z, object_pose.apply(p).z());
  }
  for (const Eigen::Vector3d& p : scene.object.contact_points()) {
    const Eigen::Vector3d world = object_pose.apply(p);
    if (world.z() <= min_z + 1e-6) lowest.push_back(world);
  }

  const Eigen::Vector3d com_world =
      object_pose.apply(Eigen::Vector3d(0.0, scene.object.length / 2.0, 0.0) +
                        scene.object.com_offset);
  const Eigen::Vector3d grasp_world =
      object_pose.apply(Eigen::Vector3d(0.0, grasp_point_on_object, 0.0));

  auto horizontal_lever = [&](const Eigen::Vector3d& point) {
    const Eigen::Vector2d p(point.x(), point.y());
    const Eigen::Vector2d a(lowest.front().x(), lowest.front().y());
    if (lowest.size() >= 2) {
      Eigen::Vector2d dir(lowest[1].x() - lowest[0].x(), lowest[1].y() - lowest[0].y());
      const double n = dir.norm();
      if (n > 1e-9) {
        dir /= n;
        const Eigen::Vector2d rel = p - a;
        return std::abs(rel.x() * dir.y() - rel.y() * dir.x());
      }
    }
    return (p - a).norm();
  };

  const double h_com = horizontal_lever(com_world);
  const double h_grasp = horizontal_lever(grasp_world);
  if (h_grasp <= 1e-9) {
    // Vertical object: both horizontal levers vanish together; the limit
    // of their ratio is the arc-length ratio along the body.
    return weight * scene.object.com_arc() / grasp_point_on_object;
  }
  return weight * h_com / h_grasp;
}

bool check_payload(const Scene& scene, double f_grip) {
  return f_grip <= scene.robot.payload;
}

}  // namespace repose
