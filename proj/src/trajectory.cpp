#include "repose/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace repose {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double pose_inclination(const Transform& object_pose) {
  return std::asin(std::clamp(object_pose.y_axis().z(), -1.0, 1.0));
}

double rotation_angle(const Transform& a, const Transform& b) {
  Eigen::AngleAxisd delta(a.rotation().transpose() * b.rotation());
  return std::abs(delta.angle());
}

// Minimal SE(3) exponential/logarithm pair for screw interpolation.
struct Twist {
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
};

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

Twist se3_log(const Transform& t) {
  Twist out;
  Eigen::AngleAxisd aa(t.rotation());
  const double angle = aa.angle();
  out.w = aa.axis() * angle;
  if (std::abs(angle) < 1e-10) {
    out.v = t.translation();
    return out;
  }
  const Eigen::Matrix3d k = skew(aa.axis());
  const double half = angle / 2.0;
  const double cot_term = half / std::tan(half);
  const Eigen::Matrix3d v_inv =
      Eigen::Matrix3d::Identity() - half * k + (1.0 - cot_term) * k * k;
  out.v = v_inv * t.translation();
  return out;
}

Transform se3_exp(const Twist& tw, double scale) {
  const Eigen::Vector3d w = tw.w * scale;
  const Eigen::Vector3d v = tw.v * scale;
  const double angle = w.norm();
  if (angle < 1e-10) {
    return Transform(Eigen::Matrix3d::Identity(), v);
  }
  const Eigen::Vector3d axis = w / angle;
  const Eigen::Matrix3d k = skew(axis);
  const Eigen::Matrix3d r = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  const Eigen::Matrix3d big_v = Eigen::Matrix3d::Identity() +
                                ((1.0 - std::cos(angle)) / angle) * k +
                                ((angle - std::sin(angle)) / angle) * k * k;
  return Transform(r, big_v * v);
}

double load_share_safe(const Scene& scene, const Transform& object_pose, double grasp_offset) {
  if (grasp_offset <= 1e-6) return std::numeric_limits<double>::infinity();
  return gripper_load_share(scene, object_pose, grasp_offset);
}

Waypoint attached_waypoint(const Scene& scene, const Transform& object_pose,
                           const GraspAnnotation& grasp) {
  Waypoint w;
  w.object_pose = object_pose;
  w.grasp = grasp;
  w.gripper_pose = compose(object_pose, grasp.grasp_in_object);
  w.contact_gap = object_lowest_point(scene.object, object_pose).z() - scene.surface.height;
  w.theta = pose_inclination(object_pose);
  w.f_grip = load_share_safe(scene, object_pose, grasp.grasp_point_offset);
  return w;
}

void check_reach(const Scene& scene, const Transform& gripper_pose, const char* where) {
  if (!scene.robot.reachable(gripper_pose.translation())) {
    raise(ErrorCode::ReachExceeded, std::string(where) + ": gripper leaves the reach shell");
  }
}

}  // namespace

void InterpolationParams::validate() const {
  if (step_translation <= 0.0 || step_rotation <= 0.0) {
    raise(ErrorCode::ValidationError, "interpolation steps must be > 0");
  }
  if (contact_tol < 0.0 || retreat_clearance < 0.0 || max_reprojection < 0.0) {
    raise(ErrorCode::ValidationError, "interpolation tolerances must be >= 0");
  }
}

std::size_t Trajectory::waypoint_count() const {
  std::size_t n = 0;
  for (const TrajectorySegment& s : segments) n += s.waypoints.size();
  return n;
}

std::vector<Waypoint> interpolate_transition(const Scene& scene, const GraphNode& from,
                                             const GraphNode& to, const TransitionCommand& cmd,
                                             const InterpolationParams& params) {
  params.validate();
  cmd.validate();
  const Transform& pose_a = from.candidate.object_pose;
  const Transform& pose_b = to.candidate.object_pose;
  const Eigen::Vector3d pivot = pose_a.translation();
  if ((pose_b.translation() - pivot).norm() > 1e-6) {
    raise(ErrorCode::InvalidEdge, "transition endpoints do not share a pivot");
  }
  const double l = scene.object.length;
  const double theta_a = cmd.theta_init;
  const double theta_b = cmd.direction == TransitionDirection::Up
                             ? cmd.theta_init + cmd.theta_target
                             : cmd.theta_init - cmd.theta_target;
  const double phi_a = from.candidate.grasp.phi;
  const double psi = theta_a + phi_a;  // gripper orientation stays fixed
  const double s_g = from.candidate.grasp.grasp_point_offset;
  const double r_com = annotation_r_com(scene.object, from.candidate.grasp);

  if (std::abs((to.candidate.grasp.phi + theta_b) - psi) > 1e-7) {
    raise(ErrorCode::InvalidEdge, "transition endpoint grasp does not meet the slip profile");
  }

  // The tilt axis is the object X axis; establish which rotation sign
  // raises the free end.
  const Eigen::Vector3d axis = pose_a.x_axis();
  double sign = 1.0;
  {
    const Transform probe = rotate_about_point(pose_a, pivot, axis, 1e-4);
    if (pose_inclination(probe) < theta_a) sign = -1.0;
  }

  // Uniform steps over the commanded vertical travel, then midpoint
  // refinement wherever a step would overdrive the waypoint bounds.
  // Near vertical the grasp point sweeps mostly horizontally, so the
  // gripper chord, not the height step, is what binds.
  std::vector<double> thetas;
  const double h_a = l * std::sin(theta_a);
  const double h_b = l * std::sin(theta_b);
  const int n = cmd.distance <= 1e-12
                    ? 0
                    : static_cast<int>(std::ceil(std::abs(h_b - h_a) / params.step_translation - 1e-9));
  for (int i = 0; i <= n; ++i) {
    const double h = n == 0 ? h_a : h_a + (h_b - h_a) * (static_cast<double>(i) / n);
    thetas.push_back(std::asin(std::clamp(h / l, -1.0, 1.0)));
  }
  thetas.front() = theta_a;
  thetas.back() = theta_b;
  auto step_too_large = [&](double t1, double t2) {
    const double dt = std::abs(t2 - t1);
    if (dt > params.step_rotation + 1e-12) return true;
    const double chord = 2.0 * s_g * std::sin(dt / 2.0);
    return chord > params.step_translation + 1e-12;
  };
  bool refined = true;
  while (refined && thetas.size() < 100000) {
    refined = false;
    for (std::size_t i = 0; i + 1 < thetas.size(); ++i) {
      if (step_too_large(thetas[i], thetas[i + 1])) {
        thetas.insert(thetas.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                      (thetas[i] + thetas[i + 1]) / 2.0);
        refined = true;
        break;
      }
    }
  }

  std::vector<Waypoint> out;
  out.reserve(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double theta = thetas[i];
    const Transform pose =
        rotate_about_point(pose_a, pivot, axis, sign * (theta - theta_a));
    const double phi = psi - theta;
    const bool last = i + 1 == thetas.size();
    GraspAnnotation grasp = make_fan_annotation(
        last ? to.candidate.grasp.id : from.candidate.grasp.id, phi, s_g,
        from.candidate.grasp.jaw_width, scene.gripper.ee_length);
    GraspState state{theta, phi, r_com};
    if (!droop_occurs(scene, state)) {
      raise(ErrorCode::DroopConditionViolated,
            "inclination " + std::to_string(theta) + " rad falls below the droop threshold");
    }
    if ((pose.translation() - pivot).norm() > 1e-6) {
      raise(ErrorCode::ContactLost, "pivot drifted during the transition");
    }
    Waypoint w = attached_waypoint(scene, pose, grasp);
    check_reach(scene, w.gripper_pose, "transition");
    out.push_back(std::move(w));
  }
  if (!out.back().gripper_pose.approx_equal(to.candidate.gripper_world, 1e-6, 1e-6)) {
    raise(ErrorCode::InvalidEdge, "transition does not land on the target grasp pose");
  }
  return out;
}

namespace {

// Shared screw-with-refinement machinery for object translations and
// regrasp transits.
std::vector<double> refined_params(int initial_steps,
                                   const std::function<bool(double, double)>& step_ok) {
  std::vector<double> ts;
  for (int i = 0; i <= initial_steps; ++i) {
    ts.push_back(initial_steps == 0 ? 0.0 : static_cast<double>(i) / initial_steps);
  }
  if (initial_steps == 0) return ts;
  bool refined = true;
  while (refined && ts.size() < 100000) {
    refined = false;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      if (!step_ok(ts[i], ts[i + 1])) {
        ts.insert(ts.begin() + static_cast<std::ptrdiff_t>(i) + 1, (ts[i] + ts[i + 1]) / 2.0);
        refined = true;
        break;
      }
    }
  }
  return ts;
}

}  // namespace

std::vector<Waypoint> interpolate_translation(const Scene& scene, const GraphNode& from,
                                              const GraphNode& to,
                                              const InterpolationParams& params) {
  params.validate();
  if (from.candidate.grasp.id != to.candidate.grasp.id) {
    raise(ErrorCode::InvalidEdge, "translation endpoints carry different grasps");
  }
  const Transform& pose_a = from.candidate.object_pose;
  const Transform& pose_b = to.candidate.object_pose;
  if (!contact_preserving(scene, pose_a) || !contact_preserving(scene, pose_b)) {
    raise(ErrorCode::InvalidEdge, "translation endpoints must keep surface contact");
  }
  const Twist twist = se3_log(compose(pose_a.inverse(), pose_b));
  const GraspAnnotation& grasp = from.candidate.grasp;

  auto object_at = [&](double t) {
    Transform pose = compose(pose_a, se3_exp(twist, t));
    const double gap = object_lowest_point(scene.object, pose).z() - scene.surface.height;
    if (std::abs(gap) > params.max_reprojection) {
      raise(ErrorCode::ContactLost,
            "contact re-projection of " + std::to_string(gap) + " m exceeds the tolerance");
    }
    return Transform(pose.rotation(),
                     pose.translation() - Eigen::Vector3d(0.0, 0.0, gap));
  };

  const double dist = (pose_b.translation() - pose_a.translation()).norm();
  const double angle = rotation_angle(pose_a, pose_b);
  if (dist < 1e-12 && angle < 1e-12) {
    Waypoint w = attached_waypoint(scene, pose_a, grasp);
    check_reach(scene, w.gripper_pose, "translation");
    return {w};
  }
  const int n = std::max({1, static_cast<int>(std::ceil(dist / params.step_translation - 1e-9)),
                          static_cast<int>(std::ceil(angle / params.step_rotation - 1e-9))});
  auto step_ok = [&](double t1, double t2) {
    const Transform o1 = object_at(t1);
    const Transform o2 = object_at(t2);
    if ((o2.translation() - o1.translation()).norm() > params.step_translation + 1e-9) return false;
    if (rotation_angle(o1, o2) > params.step_rotation + 1e-9) return false;
    const Transform g1 = compose(o1, grasp.grasp_in_object);
    const Transform g2 = compose(o2, grasp.grasp_in_object);
    if ((g2.translation() - g1.translation()).norm() > params.step_translation + 1e-9) return false;
    return rotation_angle(g1, g2) <= params.step_rotation + 1e-9;
  };
  const std::vector<double> ts = refined_params(n, step_ok);

  std::vector<Waypoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const Transform pose = t >= 1.0 ? pose_b : (t <= 0.0 ? pose_a : object_at(t));
    Waypoint w = attached_waypoint(scene, pose, grasp);
    check_reach(scene, w.gripper_pose, "translation");
    out.push_back(std::move(w));
  }
  return out;
}

RegraspPhases interpolate_regrasp_phases(const Scene& scene, const GraphNode& from,
                                         const GraphNode& to,
                                         const InterpolationParams& params) {
  params.validate();
  if (from.candidate.grasp.id == to.candidate.grasp.id) {
    raise(ErrorCode::InvalidEdge, "regrasp endpoints share one grasp");
  }
  if (!(pose_key(from.candidate.object_pose) == pose_key(to.candidate.object_pose))) {
    raise(ErrorCode::InvalidEdge, "regrasp endpoints must share one stable object pose");
  }
  if (!fully_supported(scene, from.candidate.object_pose, 1e-6)) {
    raise(ErrorCode::InvalidEdge, "regrasp requires a fully supported placement");
  }
  const Transform& object_pose = from.candidate.object_pose;

  auto detached_waypoint = [&](const Transform& gripper_pose, const GraspAnnotation& grasp) {
    Waypoint w;
    w.object_pose = object_pose;
    w.grasp = grasp;
    w.gripper_pose = gripper_pose;
    w.contact_gap =
        object_lowest_point(scene.object, object_pose).z() - scene.surface.height;
    w.theta = pose_inclination(object_pose);
    w.f_grip = 0.0;  // the surface carries the full weight while regrasping
    return w;
  };

  RegraspPhases result;
  const Transform& grip_a = from.candidate.gripper_world;
  const Transform& grip_b = to.candidate.gripper_world;
  const Eigen::Vector3d approach_a = grip_a.z_axis();
  const Eigen::Vector3d approach_b = grip_b.z_axis();
  const double clearance = params.retreat_clearance;
  const int n_retreat =
      std::max(1, static_cast<int>(std::ceil(clearance / params.step_translation - 1e-9)));

  // Retreat along the released grasp's approach axis.
  for (int i = 0; i <= n_retreat; ++i) {
    const double s = clearance * static_cast<double>(i) / n_retreat;
    const Transform pose(grip_a.rotation(), grip_a.translation() - approach_a * s);
    check_reach(scene, pose, "regrasp retreat");
    result.waypoints.push_back(detached_waypoint(pose, from.candidate.grasp));
  }
  result.transit_begin = static_cast<int>(result.waypoints.size());

  // Gripper-only screw toward the pre-approach pose of the new grasp.
  const Transform transit_start(grip_a.rotation(), grip_a.translation() - approach_a * clearance);
  const Transform transit_end(grip_b.rotation(), grip_b.translation() - approach_b * clearance);
  const Twist twist = se3_log(compose(transit_start.inverse(), transit_end));
  const double dist = (transit_end.translation() - transit_start.translation()).norm();
  const double angle = rotation_angle(transit_start, transit_end);
  if (dist > 1e-12 || angle > 1e-12) {
    const int n = std::max({1, static_cast<int>(std::ceil(dist / params.step_translation - 1e-9)),
                            static_cast<int>(std::ceil(angle / params.step_rotation - 1e-9))});
    auto gripper_at = [&](double t) { return compose(transit_start, se3_exp(twist, t)); };
    auto step_ok = [&](double t1, double t2) {
      const Transform g1 = gripper_at(t1);
      const Transform g2 = gripper_at(t2);
      if ((g2.translation() - g1.translation()).norm() > params.step_translation + 1e-9) {
        return false;
      }
      return rotation_angle(g1, g2) <= params.step_rotation + 1e-9;
    };
    for (double t : refined_params(n, step_ok)) {
      if (t <= 0.0) continue;  // boundary shared with the retreat end
      const Transform pose = t >= 1.0 ? transit_end : gripper_at(t);
      if (gripper_lowest_z(scene.gripper, pose) < scene.surface.height - 1e-9) {
        raise(ErrorCode::CollisionInTransit, "gripper body hits the surface between grasps");
      }
      check_reach(scene, pose, "regrasp transit");
      result.waypoints.push_back(detached_waypoint(pose, to.candidate.grasp));
    }
  }
  result.approach_begin = static_cast<int>(result.waypoints.size());

  // Descend onto the new grasp.
  for (int i = 1; i <= n_retreat; ++i) {
    const double s = clearance * (1.0 - static_cast<double>(i) / n_retreat);
    const Transform pose(grip_b.rotation(), grip_b.translation() - approach_b * s);
    check_reach(scene, pose, "regrasp approach");
    result.waypoints.push_back(detached_waypoint(pose, to.candidate.grasp));
  }
  return result;
}

std::vector<Waypoint> interpolate_regrasp(const Scene& scene, const GraphNode& from,
                                          const GraphNode& to,
                                          const InterpolationParams& params) {
  return interpolate_regrasp_phases(scene, from, to, params).waypoints;
}

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ContactLost: return "ContactLost";
    case ViolationKind::DroopConditionViolated: return "DroopConditionViolated";
    case ViolationKind::PayloadExceeded: return "PayloadExceeded";
    case ViolationKind::ReachExceeded: return "ReachExceeded";
    case ViolationKind::InclinationOutOfRange: return "InclinationOutOfRange";
  }
  return "unknown";
}

VerificationReport verify_trajectory(const Scene& scene, const Trajectory& trajectory,
                                     const InterpolationParams& params) {
  VerificationReport report;
  for (std::size_t si = 0; si < trajectory.segments.size(); ++si) {
    const TrajectorySegment& segment = trajectory.segments[si];
    for (std::size_t wi = 0; wi < segment.waypoints.size(); ++wi) {
      const Waypoint& w = segment.waypoints[wi];
      VerificationEntry entry;
      entry.segment = static_cast<int>(si);
      entry.waypoint = static_cast<int>(wi);
      entry.contact_gap = w.contact_gap;
      entry.theta = w.theta;
      entry.f_grip = w.f_grip;
      const GraspState state{std::clamp(w.theta, 0.0, kHalfPi), w.grasp.phi,
                             annotation_r_com(scene.object, w.grasp)};
      entry.droop_margin = gravity_torque(scene, state) - scene.friction_torque_limit();
      entry.reach_ok = scene.robot.reachable(w.gripper_pose.translation());

      if (segment.kind == EdgeKind::Regrasp) {
        if (!fully_supported(scene, w.object_pose, 1e-6)) {
          entry.violations.push_back(ViolationKind::ContactLost);
        }
      } else if (w.contact_gap < -1e-6 || w.contact_gap > params.contact_tol) {
        entry.violations.push_back(ViolationKind::ContactLost);
      }
      if (segment.kind == EdgeKind::GraspTransition && entry.droop_margin <= 0.0) {
        entry.violations.push_back(ViolationKind::DroopConditionViolated);
      }
      if (!check_payload(scene, w.f_grip)) {
        entry.violations.push_back(ViolationKind::PayloadExceeded);
      }
      if (!entry.reach_ok) entry.violations.push_back(ViolationKind::ReachExceeded);
      if (w.theta < -1e-9 || w.theta > kHalfPi + 1e-9) {
        entry.violations.push_back(ViolationKind::InclinationOutOfRange);
      }
      report.violation_count += static_cast<int>(entry.violations.size());
      report.entries.push_back(std::move(entry));
    }
  }
  report.pass = report.violation_count == 0;
  return report;
}

std::string render_verification(const VerificationReport& report) {
  std::ostringstream out;
  out << "verification " << (report.pass ? "pass" : "fail") << " waypoints="
      << report.entries.size() << " violations=" << report.violation_count << "\n";
  for (const VerificationEntry& e : report.entries) {
    if (e.violations.empty()) continue;
    out << "  segment " << e.segment << " waypoint " << e.waypoint << ":";
    for (ViolationKind v : e.violations) out << " " << violation_kind_name(v);
    out << " (gap=" << fmt(e.contact_gap) << " theta=" << fmt(e.theta)
        << " f_grip=" << fmt(e.f_grip) << ")\n";
  }
  return out.str();
}

Trajectory assemble_trajectory(const Scene& scene, const ManipulationGraph& graph,
                               const PlanPath& path, const InterpolationParams& params) {
  Trajectory trajectory;
  for (std::size_t i = 0; i < path.edge_indices.size(); ++i) {
    const GraphEdge& edge = graph.edges[static_cast<std::size_t>(path.edge_indices[i])];
    const GraphNode& from = graph.node(edge.from);
    const GraphNode& to = graph.node(edge.to);
    TrajectorySegment segment;
    segment.kind = edge.kind;
    segment.command = edge.command;
    try {
      switch (edge.kind) {
        case EdgeKind::GraspTransition:
          segment.waypoints = interpolate_transition(scene, from, to, *edge.command, params);
          break;
        case EdgeKind::Translation:
          segment.waypoints = interpolate_translation(scene, from, to, params);
          break;
        case EdgeKind::Regrasp: {
          RegraspPhases phases = interpolate_regrasp_phases(scene, from, to, params);
          segment.waypoints = std::move(phases.waypoints);
          segment.transit_begin = phases.transit_begin;
          segment.approach_begin = phases.approach_begin;
          break;
        }
      }
    } catch (const Error& e) {
      raise(e.code(), "edge " + std::to_string(edge.from) + "->" + std::to_string(edge.to) +
                          " (" + edge_kind_name(edge.kind) + "): " + e.what());
    }
    // Boundary waypoints are shared between consecutive segments.
    if (!trajectory.segments.empty() && !segment.waypoints.empty()) {
      const Waypoint& prev = trajectory.segments.back().waypoints.back();
      const Waypoint& head = segment.waypoints.front();
      if (prev.object_pose.approx_equal(head.object_pose, 1e-9, 1e-9) &&
          prev.gripper_pose.approx_equal(head.gripper_pose, 1e-9, 1e-9)) {
        segment.waypoints.erase(segment.waypoints.begin());
        if (segment.transit_begin > 0) segment.transit_begin -= 1;
        if (segment.approach_begin > 0) segment.approach_begin -= 1;
      }
    }
    trajectory.segments.push_back(std::move(segment));
  }
  const VerificationReport report = verify_trajectory(scene, trajectory, params);
  if (!report.pass) {
    raise(ErrorCode::VerificationFailed,
          "assembled trajectory fails verification:\n" + render_verification(report));
  }
  return trajectory;
}

std::string serialize_trajectory(const Trajectory& trajectory) {
  std::ostringstream out;
  std::size_t global = 0;
  for (std::size_t si = 0; si < trajectory.segments.size(); ++si) {
    const TrajectorySegment& s = trajectory.segments[si];
    out << "segment " << si << " kind=" << edge_kind_name(s.kind)
        << " waypoints=" << s.waypoints.size();
    if (s.command) {
      out << " direction="
          << (s.command->direction == TransitionDirection::Up ? "up" : "down")
          << " distance=" << fmt(s.command->distance)
          << " theta_init=" << fmt(s.command->theta_init)
          << " theta_target=" << fmt(s.command->theta_target);
    }
    if (s.kind == EdgeKind::Regrasp) {
      out << " transit_begin=" << s.transit_begin << " approach_begin=" << s.approach_begin;
    }
    out << "\n";
    for (const Waypoint& w : s.waypoints) {
      Eigen::Quaterniond gq(w.gripper_pose.rotation());
      Eigen::Quaterniond oq(w.object_pose.rotation());
      out << global++;
      for (double v : {w.gripper_pose.translation().x(), w.gripper_pose.translation().y(),
                       w.gripper_pose.translation().z(), gq.w(), gq.x(), gq.y(), gq.z()}) {
        out << " " << fmt(v);
      }
      for (double v : {w.object_pose.translation().x(), w.object_pose.translation().y(),
                       w.object_pose.translation().z(), oq.w(), oq.x(), oq.y(), oq.z()}) {
        out << " " << fmt(v);
      }
      out << " " << w.grasp.id << " " << fmt(w.theta * 180.0 / M_PI) << " "
          << fmt(w.contact_gap * 1000.0) << " " << fmt(w.f_grip) << "\n";
    }
  }
  return out.str();
}

}  // namespace repose
