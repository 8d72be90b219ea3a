#pragma once

#include <string>
#include <vector>

#include "repose/graph.hpp"

namespace repose {

struct InterpolationParams {
  double step_translation = 0.005;       // m, max frame-origin motion per waypoint
  double step_rotation = 2.0 * M_PI / 180.0;  // rad, max frame rotation per waypoint
  double contact_tol = 1e-3;             // m, allowed hover during contact phases
  double retreat_clearance = 0.05;       // m, regrasp withdraw distance
  double max_reprojection = 0.02;        // m, largest contact snap before ContactLost

  void validate() const;
};

struct Waypoint {
  Transform gripper_pose;
  Transform object_pose;
  GraspAnnotation grasp;
  double contact_gap = 0.0;  // m, lowest object point minus surface height
  double theta = 0.0;        // rad, object-axis inclination
  double f_grip = 0.0;       // N, vertical load on the gripper
};

enum class RegraspPhase { Retreat, Transit, Approach };

struct TrajectorySegment {
  EdgeKind kind = EdgeKind::Translation;
  std::optional<TransitionCommand> command;
  std::vector<Waypoint> waypoints;
  // Regrasp segments: waypoint index where transit begins / where
  // approach begins (after boundary dedup).
  int transit_begin = -1;
  int approach_begin = -1;
};

struct Trajectory {
  std::vector<TrajectorySegment> segments;

  std::size_t waypoint_count() const;
};

/// Gripper motion realizing an in-hand transition: the vertical travel
/// equals cmd.distance in uniform height steps while the grasp point
/// tracks the pivot-contact solution theta(h) = asin(h / l), and the
/// grasp annotation slips continuously between the endpoint grasps.
/// The slip condition must hold at every waypoint.
std::vector<Waypoint> interpolate_transition(const Scene& scene, const GraphNode& from,
                                             const GraphNode& to, const TransitionCommand& cmd,
                                             const InterpolationParams& params = {});

/// Screw interpolation of the object pose between two poses sharing a
/// grasp, re-projected onto the surface at every step.
std::vector<Waypoint> interpolate_translation(const Scene& scene, const GraphNode& from,
                                              const GraphNode& to,
                                              const InterpolationParams& params = {});

/// Retreat / transit / approach around a stable placement; the object
/// never moves and carries no gripper load.
std::vector<Waypoint> interpolate_regrasp(const Scene& scene, const GraphNode& from,
                                          const GraphNode& to,
                                          const InterpolationParams& params = {});

struct RegraspPhases {
  std::vector<Waypoint> waypoints;
  int transit_begin = 0;
  int approach_begin = 0;
};

RegraspPhases interpolate_regrasp_phases(const Scene& scene, const GraphNode& from,
                                         const GraphNode& to,
                                         const InterpolationParams& params = {});

enum class ViolationKind {
  ContactLost,
  DroopConditionViolated,
  PayloadExceeded,
  ReachExceeded,
  InclinationOutOfRange,
};

const char* violation_kind_name(ViolationKind kind);

struct VerificationEntry {
  int segment = 0;
  int waypoint = 0;  // index within the segment
  double contact_gap = 0.0;
  double theta = 0.0;
  double droop_margin = 0.0;  // gravity torque minus friction limit
  double f_grip = 0.0;
  bool reach_ok = true;
  std::vector<ViolationKind> violations;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;
  bool pass = true;
  int violation_count = 0;
};

/// Per-waypoint contact, droop, payload, and reach audit. Failures are
/// report entries, never exceptions.
VerificationReport verify_trajectory(const Scene& scene, const Trajectory& trajectory,
                                     const InterpolationParams& params = {});

std::string render_verification(const VerificationReport& report);

/// Interpolates every edge of the path, deduplicates boundary waypoints,
/// verifies the result, and only then returns it. Interpolation errors
/// are re-raised annotated with the offending edge.
Trajectory assemble_trajectory(const Scene& scene, const ManipulationGraph& graph,
                               const PlanPath& path, const InterpolationParams& params = {});

/// Line-oriented trajectory dump; field order documented in docs/formats.md.
std::string serialize_trajectory(const Trajectory& trajectory);

}  // namespace repose
