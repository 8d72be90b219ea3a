#pragma once

#include "repose/scene.hpp"

namespace repose {

/// Quasi-static in-hand state driving the torque and transition math.
///
/// theta is the shared inclination of the in-hand plane (object axis and
/// gripper approach axis both live in one vertical plane; the jaw axis
/// is its horizontal normal). phi is the in-hand angle between the
/// approach axis and the object axis, with phi = 0 meaning the object
/// extends the end-effector axis. r_com is the arc distance from the
/// grasp point to the object's center of mass along the body.
struct GraspState {
  double theta = 0.0;  // rad, in [0, pi/2]
  double phi = 0.0;    // rad, in [0, pi]
  double r_com = 0.0;  // m, >= 0

  void validate() const;
};

enum class TransitionDirection { Up, Down };

struct TransitionCommand {
  TransitionDirection direction = TransitionDirection::Up;
  double distance = 0.0;      // m, vertical gripper travel
  double theta_init = 0.0;    // rad, object inclination before the motion
  double theta_target = 0.0;  // rad, inclination change magnitude

  void validate() const;
};

/// Gravity torque about the jaw-opening axis:
///   T_g = (m g / 2) sin(theta) sin(phi) (r_com sin(phi))
///       + (m g / 2) sin(theta) cos(phi) (ee_length + r_com cos(phi))
/// Nonnegative over the invariant ranges with phi <= pi/2.
double gravity_torque(const Scene& scene, const GraspState& gs);

/// d T_g / d theta at fixed (phi, r_com).
double gravity_torque_dtheta(const Scene& scene, const GraspState& gs);

/// True iff the gravity torque strictly exceeds the pads' friction
/// torque capacity, i.e. the grasped object slips when unconstrained.
bool droop_occurs(const Scene& scene, const GraspState& gs);

/// Inclination at which gravity torque equals the friction limit for
/// fixed (phi, r_com); pi/2 + 1 when no inclination reaches it, 0 when
/// every positive inclination droops.
double droop_threshold_theta(const Scene& scene, double phi, double r_com);

/// Vertical gripper travel that realizes an upward in-hand transition:
///   d_up = l [sin(theta_init + theta_target) - sin(theta_init)]
/// Throws AngleOutOfRange when the motion leaves [0, pi/2].
double transition_distance_up(double l_stick, double theta_init, double theta_target);

/// Downward mirror:
///   d_down = l [sin(theta_init) - sin(theta_init - theta_target)]
double transition_distance_down(double l_stick, double theta_init, double theta_target);

/// Vertical force the gripper carries under a rigid-lever moment balance
/// about the surface contact pivot. Zero when the object rests fully on
/// the surface; for pivot contact the horizontal lever ratio applies,
/// degenerating to the arc-length ratio when the object is vertical.
/// Throws DegenerateGrasp when grasp_point_on_object <= 1e-6.
double gripper_load_share(const Scene& scene, const Transform& object_pose,
                          double grasp_point_on_object);

/// Payload check, boundary inclusive.
bool check_payload(const Scene& scene, double f_grip);

}  // namespace repose
