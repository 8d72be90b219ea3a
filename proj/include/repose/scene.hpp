#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "repose/transform.hpp"

namespace repose {

enum class ObjectShape { Stick, Board };

/// Object frame convention: the origin sits at the pivot end (the end
/// kept in contact with the surface), the body extends along +Y, and
/// flat placement puts the contact geometry at Z = 0.
///
/// Contact geometry is the skeleton the transition equations assume:
/// a stick is its axis segment (end-cap rim ignored, pivot = the axis
/// endpoint), a board is its bottom face with the pivot edge along X
/// through the origin. Physical diameter/thickness only matter for the
/// gripper collision volume and the drawn frames.
struct ObjectModel {
  std::string name;
  ObjectShape shape = ObjectShape::Stick;
  double length = 0.0;     // m, along +Y
  double diameter = 0.0;   // m, stick only
  double width = 0.0;      // m, board only, along X
  double thickness = 0.0;  // m, board only, along +Z
  double mass = 0.0;       // kg
  Eigen::Vector3d com_offset = Eigen::Vector3d::Zero();  // from the body center, object frame

  void validate() const;

  /// Contact skeleton vertices in the object frame.
  std::vector<Eigen::Vector3d> contact_points() const;

  /// Arc distance from the pivot end to the center of mass along the body.
  double com_arc() const { return length / 2.0 + com_offset.y(); }
};

/// Gripper frame convention: origin at the wrist (flange reference),
/// +Z is the approach axis, the tool center point sits at (0,0,ee_length),
/// and +X is the jaw-opening axis. The collision body is a box spanning
/// [0, body_box.z()] along +Z, laterally centered; the fingers between
/// the box and the TCP are ignored.
struct GripperModel {
  double ee_length = 0.0;      // m, wrist to TCP
  double jaw_max_open = 0.0;   // m
  double grip_force = 0.0;     // N
  double pad_torsion_coefficient = 0.0;  // m, effective torsional lever of the pad
  double pad_friction_torque_limit = 0.0;  // N*m, resolved at load time
  Eigen::Vector3d body_box = Eigen::Vector3d::Zero();  // extents, m

  void validate() const;

  Eigen::Vector3d tcp_in_gripper() const { return Eigen::Vector3d(0.0, 0.0, ee_length); }
};

/// Reachability stands in for IK: the gripper origin must fall inside
/// the spherical shell [reach_min, reach_max] around the base and inside
/// the [z_min, z_max] band.
struct RobotModel {
  Transform base_pose;
  double reach_min = 0.0;
  double reach_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  double payload = 0.0;  // N, max vertical force at the gripper

  void validate() const;

  bool reachable(const Eigen::Vector3d& gripper_origin) const {
    const double d = (gripper_origin - base_pose.translation()).norm();
    return d >= reach_min && d <= reach_max && gripper_origin.z() >= z_min &&
           gripper_origin.z() <= z_max;
  }
};

struct Scene {
  SupportSurface surface;
  ObjectModel object;
  GripperModel gripper;
  RobotModel robot;
  double gravity = 9.81;  // m/s^2

  void validate() const;

  double friction_torque_limit() const { return gripper.pad_friction_torque_limit; }
};

struct TaskSpec {
  Transform start_pose;  // object in world
  Transform goal_pose;   // object in world
};

/// Loads and validates a scene configuration file. Unknown sections or
/// keys are rejected; see docs/formats.md for the schema.
Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& text, const std::string& origin);

/// Canonical text form; parse_scene(serialize_scene(s)) reproduces every
/// field bit-for-bit.
std::string serialize_scene(const Scene& scene);

/// World point of the object's contact geometry with minimal Z. Ties are
/// broken toward smaller world Y, then smaller world X.
Eigen::Vector3d object_lowest_point(const ObjectModel& object, const Transform& pose);

/// An object pose counts as fully supported when every contact vertex
/// sits on the surface plane within tol.
bool fully_supported(const Scene& scene, const Transform& object_pose, double tol = 1e-6);

/// Object pose assembled the same way bouquet poses are: flat at the
/// placement point (u, v), rotated about the placement X axis by x_rot,
/// then about its Z axis by z_rot.
Transform object_pose_at(const SupportSurface& surface, double u, double v, double x_rot,
                         double z_rot);

struct PoseSpec {
  double u = 0.0;
  double v = 0.0;
  double x_rot = 0.0;  // radians
  double z_rot = 0.0;  // radians
};

struct Task {
  TaskSpec spec;
  PoseSpec start;
  PoseSpec goal;
  std::vector<std::pair<PoseSpec, PoseSpec>> blocked;
};

/// Loads a task file ([start], [goal], optional repeated [block]) and
/// validates both poses against the scene contact invariants.
Task load_task(const std::string& path, const Scene& scene);
Task parse_task(const std::string& text, const std::string& origin, const Scene& scene);

}  // namespace repose
