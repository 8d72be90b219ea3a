#include "repose/grasps.hpp"

#include <cmath>
#include <cstdio>
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

}  // namespace

Transform fan_grasp_pose(double phi, double offset, double ee_length) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  Eigen::Matrix3d r;
  // Columns: jaw axis (object +X), in-plane normal, approach axis.
  r.col(0) = Eigen::Vector3d(1.0, 0.0, 0.0);
  r.col(1) = Eigen::Vector3d(0.0, -s, c);
  r.col(2) = Eigen::Vector3d(0.0, -c, -s);
  // Wrist sits ee_length behind the TCP along the approach axis.
  const Eigen::Vector3d wrist =
      Eigen::Vector3d(0.0, offset, 0.0) - ee_length * r.col(2);
  return Transform(r, wrist);
}

GraspAnnotation make_fan_annotation(int id, double phi, double offset, double jaw_width,
                                    double ee_length) {
  GraspAnnotation g;
  g.id = id;
  g.phi = phi;
  g.grasp_point_offset = offset;
  g.jaw_width = jaw_width;
  g.grasp_in_object = fan_grasp_pose(phi, offset, ee_length);
  return g;
}

std::vector<GraspAnnotation> default_grasp_fan(const ObjectModel& object,
                                               const GripperModel& gripper) {
  const double jaw =
      object.shape == ObjectShape::Stick ? object.diameter : object.thickness;
  std::vector<GraspAnnotation> out;
  int id = 0;
  for (double deg : {0.0, 45.0, 90.0, 135.0, 180.0}) {
    out.push_back(
        make_fan_annotation(id++, deg * kDegToRad, object.length, jaw, gripper.ee_length));
  }
  return out;
}

double annotation_r_com(const ObjectModel& object, const GraspAnnotation& grasp) {
  return std::abs(grasp.grasp_point_offset - object.com_arc());
}

namespace {

void validate_annotation(const GraspAnnotation& g, const ObjectModel& object,
                         const GripperModel& gripper) {
  if (g.jaw_width > gripper.jaw_max_open + 1e-12) {
    raise(ErrorCode::ValidationError,
          "grasp " + std::to_string(g.id) + ": jaw_width exceeds gripper.jaw_max_open");
  }
  if (g.grasp_point_offset < -1e-12 || g.grasp_point_offset > object.length + 1e-12) {
    raise(ErrorCode::ValidationError,
          "grasp " + std::to_string(g.id) + ": grasp point off the object body");
  }
}

std::vector<GraspAnnotation> parse_grasp_set_from(const ConfigFile& file,
                                                  const ObjectModel& object,
                                                  const GripperModel& gripper) {
  file.restrict_sections({"grasp"});
  std::vector<GraspAnnotation> out;
  for (const ConfigSection* section : file.find_all("grasp")) {
    SectionReader r(file, *section);
    GraspAnnotation g;
    g.id = r.get_int("id");
    const Eigen::Vector3d position = r.get_vec3("position");
    const Eigen::Vector3d axis = r.get_vec3("axis");
    const double angle = r.get_double("angle_deg") * kDegToRad;
    g.jaw_width = r.get_double("jaw_width");
    r.finish();
    const double n = axis.norm();
    if (n < 1e-9) {
      raise(ErrorCode::ValidationError,
            file.origin + ": grasp " + std::to_string(g.id) + " has a zero rotation axis");
    }
    g.grasp_in_object = Transform::from_axis_angle(axis / n, angle, position);
    // phi and the grasp point are derived views of the stored pose.
    const Eigen::Vector3d approach = g.grasp_in_object.z_axis();
    g.phi = std::acos(std::clamp(-approach.y(), -1.0, 1.0));
    g.grasp_point_offset = g.tcp_in_object(gripper).y();
    validate_annotation(g, object, gripper);
    for (const GraspAnnotation& other : out) {
      if (other.id == g.id) {
        raise(ErrorCode::ValidationError,
              file.origin + ": duplicate grasp id " + std::to_string(g.id));
      }
    }
    out.push_back(std::move(g));
  }
  if (out.empty()) {
    raise(ErrorCode::ValidationError, file.origin + ": grasp set holds no [grasp] sections");
  }
  return out;
}

}  // namespace

std::vector<GraspAnnotation> load_grasp_set(const std::string& path, const ObjectModel& object,
                                            const GripperModel& gripper) {
  return parse_grasp_set_from(ConfigFile::parse_file(path), object, gripper);
}

std::vector<GraspAnnotation> parse_grasp_set(const std::string& text, const std::string& origin,
                                             const ObjectModel& object,
                                             const GripperModel& gripper) {
  return parse_grasp_set_from(ConfigFile::parse_string(text, origin), object, gripper);
}

std::string serialize_grasp_set(const std::vector<GraspAnnotation>& grasps) {
  std::ostringstream out;
  for (const GraspAnnotation& g : grasps) {
    Eigen::AngleAxisd aa(g.grasp_in_object.rotation());
    Eigen::Vector3d axis = aa.axis();
    double angle = aa.angle();
    if (std::abs(angle) < 1e-12) {
      axis = Eigen::Vector3d::UnitX();
      angle = 0.0;
    }
    out << "[grasp]\n";
    out << "id = " << g.id << "\n";
    out << "position = " << fmt(g.grasp_in_object.translation().x()) << " "
        << fmt(g.grasp_in_object.translation().y()) << " "
        << fmt(g.grasp_in_object.translation().z()) << "\n";
    out << "axis = " << fmt(axis.x()) << " " << fmt(axis.y()) << " " << fmt(axis.z()) << "\n";
    out << "angle_deg = " << fmt(angle / kDegToRad) << "\n";
    out << "jaw_width = " << fmt(g.jaw_width) << "\n\n";
  }
  return out.str();
}

}  // namespace repose
