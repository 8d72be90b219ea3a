#pragma once

#include <string>
#include <vector>

#include "repose/scene.hpp"

namespace repose {

/// A pre-annotated grasp: where the gripper (wrist frame) sits in the
/// object frame, plus the derived in-hand quantities the mechanics use.
struct GraspAnnotation {
  int id = 0;
  Transform grasp_in_object;     // wrist frame in object frame
  double phi = 0.0;              // rad, in-hand angle between approach and object axis
  double grasp_point_offset = 0.0;  // m, TCP arc distance from the pivot end
  double jaw_width = 0.0;        // m

  Eigen::Vector3d tcp_in_object(const GripperModel& gripper) const {
    return grasp_in_object.apply(gripper.tcp_in_gripper());
  }
};

/// Wrist pose realizing an in-hand angle phi at arc offset `offset`
/// along the object, jaw axis along object +X. phi = 0 points the
/// approach axis back along the body (object extends the EE axis),
/// phi = pi/2 is the straight top grasp on a flat object.
Transform fan_grasp_pose(double phi, double offset, double ee_length);

GraspAnnotation make_fan_annotation(int id, double phi, double offset, double jaw_width,
                                    double ee_length);

/// Default annotation set: a fan at the free end of the object,
/// phi in {0, 45, 90, 135, 180} degrees.
std::vector<GraspAnnotation> default_grasp_fan(const ObjectModel& object,
                                               const GripperModel& gripper);

/// Arc distance from the grasp point to the center of mass.
double annotation_r_com(const ObjectModel& object, const GraspAnnotation& grasp);

std::vector<GraspAnnotation> load_grasp_set(const std::string& path, const ObjectModel& object,
                                            const GripperModel& gripper);
std::vector<GraspAnnotation> parse_grasp_set(const std::string& text, const std::string& origin,
                                             const ObjectModel& object,
                                             const GripperModel& gripper);

std::string serialize_grasp_set(const std::vector<GraspAnnotation>& grasps);

}  // namespace repose
