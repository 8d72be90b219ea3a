#include "repose/scene.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "repose/config.hpp"

namespace repose {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scene parse_scene_from(const ConfigFile& file);
Task parse_task_from(const ConfigFile& file, const Scene& scene);

}  // namespace

void ObjectModel::validate() const {
  if (mass <= 0.0) raise(ErrorCode::ValidationError, "object.mass must be > 0");
  if (length <= 0.0) raise(ErrorCode::ValidationError, "object.length must be > 0");
  if (shape == ObjectShape::Stick) {
    if (diameter <= 0.0) raise(ErrorCode::ValidationError, "object.diameter must be > 0");
    if (std::hypot(com_offset.x(), com_offset.z()) > diameter / 2.0 + 1e-12 ||
        std::abs(com_offset.y()) > length / 2.0 + 1e-12) {
      raise(ErrorCode::ValidationError, "object.com_offset outside the stick volume");
    }
  } else {
    if (width <= 0.0) raise(ErrorCode::ValidationError, "object.width must be > 0");
    if (thickness <= 0.0) raise(ErrorCode::ValidationError, "object.thickness must be > 0");
    if (std::abs(com_offset.x()) > width / 2.0 + 1e-12 ||
        std::abs(com_offset.y()) > length / 2.0 + 1e-12 ||
        std::abs(com_offset.z()) > thickness / 2.0 + 1e-12) {
      raise(ErrorCode::ValidationError, "object.com_offset outside the board volume");
    }
  }
}

std::vector<Eigen::Vector3d> ObjectModel::contact_points() const {
  if (shape == ObjectShape::Stick) {
    return {Eigen::Vector3d(0.0, 0.0, 0.0), Eigen::Vector3d(0.0, length, 0.0)};
  }
  const double hw = width / 2.0;
  return {Eigen::Vector3d(-hw, 0.0, 0.0), Eigen::Vector3d(hw, 0.0, 0.0),
          Eigen::Vector3d(-hw, length, 0.0), Eigen::Vector3d(hw, length, 0.0)};
}

void GripperModel::validate() const {
  if (ee_length <= 0.0) raise(ErrorCode::ValidationError, "gripper.ee_length must be > 0");
  if (jaw_max_open <= 0.0) raise(ErrorCode::ValidationError, "gripper.jaw_max_open must be > 0");
  if (grip_force < 0.0) raise(ErrorCode::ValidationError, "gripper.grip_force must be >= 0");
  if (pad_torsion_coefficient < 0.0) {
    raise(ErrorCode::ValidationError, "gripper.pad_torsion_coefficient must be >= 0");
  }
  if (pad_friction_torque_limit < 0.0) {
    raise(ErrorCode::ValidationError, "gripper.pad_friction_torque_limit must be >= 0");
  }
  if (body_box.minCoeff() <= 0.0) {
    raise(ErrorCode::ValidationError, "gripper.body_box extents must be > 0");
  }
}

void RobotModel::validate() const {
  if (reach_min < 0.0 || reach_min >= reach_max) {
    raise(ErrorCode::ValidationError, "robot reach shell requires 0 <= reach_min < reach_max");
  }
  if (z_min >= z_max) raise(ErrorCode::ValidationError, "robot requires z_min < z_max");
  if (payload <= 0.0) raise(ErrorCode::ValidationError, "robot.payload must be > 0");
}

void Scene::validate() const {
  surface.validate();
  object.validate();
  gripper.validate();
  robot.validate();
  if (gravity <= 0.0) raise(ErrorCode::ValidationError, "gravity must be > 0");
}

Scene load_scene(const std::string& path) {
  return parse_scene_from(ConfigFile::parse_file(path));
}

Scene parse_scene(const std::string& text, const std::string& origin) {
  return parse_scene_from(ConfigFile::parse_string(text, origin));
}

namespace {
Scene parse_scene_from(const ConfigFile& file) {
  file.restrict_sections({"surface", "object", "gripper", "robot", "gravity"});
  Scene scene;

  const ConfigSection* surface_sec = file.find("surface");
  if (surface_sec == nullptr) raise(ErrorCode::ValidationError, file.origin + ": missing [surface]");
  {
    SectionReader r(file, *surface_sec);
    const double ox = r.get_double("origin_x");
    const double oy = r.get_double("origin_y");
    const double yaw = r.get_double_or("yaw_deg", 0.0) * kDegToRad;
    scene.surface.height = r.get_double("height");
    scene.surface.extent_x = r.get_double("extent_x");
    scene.surface.extent_y = r.get_double("extent_y");
    scene.surface.origin =
        Transform(Transform::rot_z(yaw).rotation(), Eigen::Vector3d(ox, oy, scene.surface.height));
    r.finish();
  }

  const ConfigSection* object_sec = file.find("object");
  if (object_sec == nullptr) raise(ErrorCode::ValidationError, file.origin + ": missing [object]");
  {
    SectionReader r(file, *object_sec);
    scene.object.name = r.get_string("name");
    const std::string shape = r.get_string("shape");
    if (shape == "stick") {
      scene.object.shape = ObjectShape::Stick;
      scene.object.length = r.get_double("length");
      scene.object.diameter = r.get_double("diameter");
    } else if (shape == "board") {
      scene.object.shape = ObjectShape::Board;
      scene.object.length = r.get_double("length");
      scene.object.width = r.get_double("width");
      scene.object.thickness = r.get_double("thickness");
    } else {
      raise(ErrorCode::ValidationError, r.context("shape") + " must be 'stick' or 'board'");
    }
    scene.object.mass = r.get_double("mass");
    if (r.has("com_offset")) scene.object.com_offset = r.get_vec3("com_offset");
    r.finish();
  }

  const ConfigSection* gripper_sec = file.find("gripper");
  if (gripper_sec == nullptr) raise(ErrorCode::ValidationError, file.origin + ": missing [gripper]");
  {
    SectionReader r(file, *gripper_sec);
    scene.gripper.ee_length = r.get_double("ee_length");
    scene.gripper.jaw_max_open = r.get_double("jaw_max_open");
    scene.gripper.grip_force = r.get_double("grip_force");
    scene.gripper.pad_torsion_coefficient = r.get_double("pad_torsion_coefficient");
    // An explicit limit wins; otherwise the soft-pad model resolves it
    // as torsion lever times grip force.
    if (r.has("pad_friction_torque_limit")) {
      scene.gripper.pad_friction_torque_limit = r.get_double("pad_friction_torque_limit");
    } else {
      scene.gripper.pad_friction_torque_limit =
          scene.gripper.pad_torsion_coefficient * scene.gripper.grip_force;
    }
    scene.gripper.body_box = r.get_vec3("body_box");
    r.finish();
  }

  const ConfigSection* robot_sec = file.find("robot");
  if (robot_sec == nullptr) raise(ErrorCode::ValidationError, file.origin + ": missing [robot]");
  {
    SectionReader r(file, *robot_sec);
    const Eigen::Vector3d base = r.get_vec3("base");
    const double yaw = r.get_double_or("base_yaw_deg", 0.0) * kDegToRad;
    scene.robot.base_pose = Transform(Transform::rot_z(yaw).rotation(), base);
    scene.robot.reach_min = r.get_double("reach_min");
    scene.robot.reach_max = r.get_double("reach_max");
    scene.robot.z_min = r.get_double("z_min");
    scene.robot.z_max = r.get_double("z_max");
    scene.robot.payload = r.get_double("payload");
    r.finish();
  }

  if (const ConfigSection* gravity_sec = file.find("gravity")) {
    SectionReader r(file, *gravity_sec);
    scene.gravity = r.get_double("g");
    r.finish();
  }

  scene.validate();
  return scene;
}
}  // namespace

std::string serialize_scene(const Scene& scene) {
  std::ostringstream out;
  const double yaw =
      std::atan2(scene.surface.origin.rotation()(1, 0), scene.surface.origin.rotation()(0, 0));
  out << "[surface]\n";
  out << "origin_x = " << fmt(scene.surface.origin.translation().x()) << "\n";
  out << "origin_y = " << fmt(scene.surface.origin.translation().y()) << "\n";
  out << "yaw_deg = " << fmt(yaw / kDegToRad) << "\n";
  out << "height = " << fmt(scene.surface.height) << "\n";
  out << "extent_x = " << fmt(scene.surface.extent_x) << "\n";
  out << "extent_y = " << fmt(scene.surface.extent_y) << "\n";
  out << "\n[object]\n";
  out << "name = " << scene.object.name << "\n";
  if (scene.object.shape == ObjectShape::Stick) {
    out << "shape = stick\n";
    out << "length = " << fmt(scene.object.length) << "\n";
    out << "diameter = " << fmt(scene.object.diameter) << "\n";
  } else {
    out << "shape = board\n";
    out << "length = " << fmt(scene.object.length) << "\n";
    out << "width = " << fmt(scene.object.width) << "\n";
    out << "thickness = " << fmt(scene.object.thickness) << "\n";
  }
  out << "mass = " << fmt(scene.object.mass) << "\n";
  out << "com_offset = " << fmt(scene.object.com_offset.x()) << " "
      << fmt(scene.object.com_offset.y()) << " " << fmt(scene.object.com_offset.z()) << "\n";
  out << "\n[gripper]\n";
  out << "ee_length = " << fmt(scene.gripper.ee_length) << "\n";
  out << "jaw_max_open = " << fmt(scene.gripper.jaw_max_open) << "\n";
  out << "grip_force = " << fmt(scene.gripper.grip_force) << "\n";
  out << "pad_torsion_coefficient = " << fmt(scene.gripper.pad_torsion_coefficient) << "\n";
  out << "pad_friction_torque_limit = " << fmt(scene.gripper.pad_friction_torque_limit) << "\n";
  out << "body_box = " << fmt(scene.gripper.body_box.x()) << " " << fmt(scene.gripper.body_box.y())
      << " " << fmt(scene.gripper.body_box.z()) << "\n";
  out << "\n[robot]\n";
  const double base_yaw =
      std::atan2(scene.robot.base_pose.rotation()(1, 0), scene.robot.base_pose.rotation()(0, 0));
  out << "base = " << fmt(scene.robot.base_pose.translation().x()) << " "
      << fmt(scene.robot.base_pose.translation().y()) << " "
      << fmt(scene.robot.base_pose.translation().z()) << "\n";
  out << "base_yaw_deg = " << fmt(base_yaw / kDegToRad) << "\n";
  out << "reach_min = " << fmt(scene.robot.reach_min) << "\n";
  out << "reach_max = " << fmt(scene.robot.reach_max) << "\n";
  out << "z_min = " << fmt(scene.robot.z_min) << "\n";
  out << "z_max = " << fmt(scene.robot.z_max) << "\n";
  out << "payload = " << fmt(scene.robot.payload) << "\n";
  out << "\n[gravity]\n";
  out << "g = " << fmt(scene.gravity) << "\n";
  return out.str();
}

Eigen::Vector3d object_lowest_point(const ObjectModel& object, const Transform& pose) {
  const std::vector<Eigen::Vector3d> points = object.contact_points();
  Eigen::Vector3d best = pose.apply(points.front());
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Eigen::Vector3d p = pose.apply(points[i]);
    if (p.z() < best.z() - 1e-9) {
      best = p;
    } else if (p.z() < best.z() + 1e-9) {
      if (p.y() < best.y() - 1e-9 || (p.y() < best.y() + 1e-9 && p.x() < best.x() - 1e-9)) {
        best = p;
      }
    }
  }
  return best;
}

bool fully_supported(const Scene& scene, const Transform& object_pose, double tol) {
  for (const Eigen::Vector3d& p : scene.object.contact_points()) {
    if (std::abs(object_pose.apply(p).z() - scene.surface.height) > tol) return false;
  }
  return true;
}

Transform object_pose_at(const SupportSurface& surface, double u, double v, double x_rot,
                         double z_rot) {
  const Transform flat =
      compose(surface.origin, Transform::from_translation(Eigen::Vector3d(u, v, 0.0)));
  const Eigen::Vector3d point = flat.translation();
  const Transform tilted = rotate_about_point(flat, point, surface.origin.x_axis(), x_rot);
  return rotate_about_point(tilted, point, surface.origin.z_axis(), z_rot);
}

namespace {

PoseSpec read_pose_spec(const ConfigFile& file, const ConfigSection& section) {
  SectionReader r(file, section);
  PoseSpec spec;
  spec.u = r.get_double("x");
  spec.v = r.get_double("y");
  spec.x_rot = r.get_double_or("x_rot_deg", 0.0) * kDegToRad;
  spec.z_rot = r.get_double_or("z_rot_deg", 0.0) * kDegToRad;
  r.finish();
  return spec;
}

PoseSpec parse_pose_selector(const std::string& text, const std::string& context) {
  const std::vector<double> values = parse_double_list(text, context);
  if (values.size() != 4) {
    raise(ErrorCode::ValidationError, context + " must hold 'x y x_rot_deg z_rot_deg'");
  }
  PoseSpec spec;
  spec.u = values[0];
  spec.v = values[1];
  spec.x_rot = values[2] * kDegToRad;
  spec.z_rot = values[3] * kDegToRad;
  return spec;
}

void validate_task_pose(const Scene& scene, const Transform& pose, const std::string& label) {
  const Eigen::Vector3d low = object_lowest_point(scene.object, pose);
  if (low.z() < scene.surface.height - 1e-6) {
    raise(ErrorCode::ValidationError, label + " pose penetrates the support surface");
  }
  const Eigen::Vector3d s = scene.surface.to_surface(low);
  if (s.x() < -1e-9 || s.x() > scene.surface.extent_x + 1e-9 || s.y() < -1e-9 ||
      s.y() > scene.surface.extent_y + 1e-9) {
    raise(ErrorCode::ValidationError, label + " pose contact point leaves the surface extents");
  }
}

}  // namespace

Task load_task(const std::string& path, const Scene& scene) {
  return parse_task_from(ConfigFile::parse_file(path), scene);
}

Task parse_task(const std::string& text, const std::string& origin, const Scene& scene) {
  return parse_task_from(ConfigFile::parse_string(text, origin), scene);
}

namespace {
Task parse_task_from(const ConfigFile& file, const Scene& scene) {
  file.restrict_sections({"start", "goal", "block"});
  const ConfigSection* start_sec = file.find("start");
  const ConfigSection* goal_sec = file.find("goal");
  if (start_sec == nullptr || goal_sec == nullptr) {
    raise(ErrorCode::ValidationError, file.origin + ": task needs [start] and [goal]");
  }
  Task task;
  task.start = read_pose_spec(file, *start_sec);
  task.goal = read_pose_spec(file, *goal_sec);
  task.spec.start_pose =
      object_pose_at(scene.surface, task.start.u, task.start.v, task.start.x_rot, task.start.z_rot);
  task.spec.goal_pose =
      object_pose_at(scene.surface, task.goal.u, task.goal.v, task.goal.x_rot, task.goal.z_rot);
  validate_task_pose(scene, task.spec.start_pose, "start");
  validate_task_pose(scene, task.spec.goal_pose, "goal");
  for (const ConfigSection* block : file.find_all("block")) {
    SectionReader r(file, *block);
    const PoseSpec from = parse_pose_selector(r.get_string("from"), r.context("from"));
    const PoseSpec to = parse_pose_selector(r.get_string("to"), r.context("to"));
    task.blocked.emplace_back(from, to);
    r.finish();
  }
  return task;
}
}  // namespace

}  // namespace repose
