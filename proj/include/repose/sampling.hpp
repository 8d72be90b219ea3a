#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repose/grasps.hpp"
#include "repose/scene.hpp"

namespace repose {

/// Discretization of the contact-preserving pose family. The lattice a
/// pose lives on is (placement ix, iy) x (tilt index into theta_levels)
/// x (azimuth index into zeta_levels); translation edges step at most
/// one level per coordinate.
struct SamplingParams {
  double spacing = 0.05;            // m, placement grid
  std::vector<double> x_steps;      // rad, tilt about the placement X axis, within [0, pi/2]
  std::vector<double> z_steps;      // rad, azimuth about the placement Z axis, within [0, 2pi)
  std::vector<double> yaw_steps;    // rad, stable-placement yaws, within [0, 2pi)

  static SamplingParams defaults();

  /// Sorted unique tilt levels: {0} plus x_steps.
  std::vector<double> theta_levels() const;
  /// Sorted unique azimuth levels: z_steps plus yaw_steps.
  std::vector<double> zeta_levels() const;

  void validate() const;
};

/// Where a candidate pose sits on the sampling lattice.
struct SampleCoords {
  int ix = 0;
  int iy = 0;
  int itheta = 0;  // index into theta_levels
  int izeta = 0;   // index into zeta_levels
  int n_zeta = 0;  // zeta level count, for cyclic adjacency
  double u = 0.0;
  double v = 0.0;
  double x_rot = 0.0;
  double z_rot = 0.0;
  bool from_bouquet = false;
  bool stable = false;
};

struct BouquetPose {
  Transform pose;
  double x_rotation = 0.0;
  double z_rotation = 0.0;
};

/// Object poses sharing one placement point, generated by tilting about
/// the placement X axis and swinging about its Z axis. Every member
/// keeps the pivot end on the point and the body above the plane.
struct Bouquet {
  PlacementPoint placement;
  std::vector<BouquetPose> poses;
};

enum class CandidateKind { Drooping, Regrasp };
enum class RejectReason { Unreachable, Collision, Payload };

const char* reject_reason_name(RejectReason reason);

struct CandidateNode {
  Transform object_pose;
  GraspAnnotation grasp;
  Transform gripper_world;
  CandidateKind kind = CandidateKind::Drooping;
  bool feasible = true;
  std::optional<RejectReason> reject_reason;
  SampleCoords coords;
};

Bouquet generate_bouquet(const Scene& scene, const PlacementPoint& placement,
                         const std::vector<double>& x_steps, const std::vector<double>& z_steps);

/// Flat poses at each placement x yaw whose full footprint stays inside
/// the surface extents.
std::vector<Transform> sample_stable_placements(const Scene& scene,
                                                const std::vector<PlacementPoint>& placements,
                                                const std::vector<double>& yaw_steps);

/// One provisional candidate per grasp at the given object pose;
/// feasibility is not evaluated here.
std::vector<CandidateNode> annotate_grasps(const Scene& scene, const Transform& object_pose,
                                           const std::vector<GraspAnnotation>& grasp_set);

/// Marks each candidate against the reach shell, the surface collision
/// check, and the payload split. Infeasible candidates are kept with
/// their reject reason; order is preserved and the pass is idempotent.
std::vector<CandidateNode> filter_feasible(const Scene& scene,
                                           const std::vector<CandidateNode>& candidates);

/// Lowest world Z over the gripper collision geometry (body box plus
/// the TCP point).
double gripper_lowest_z(const GripperModel& gripper, const Transform& gripper_world);

bool contact_preserving(const Scene& scene, const Transform& object_pose, double tol = 1e-6);

/// Full deterministic candidate enumeration: bouquets over the whole
/// placement grid (row-major, tilt-major, then azimuth, then grasp),
/// followed by stable placements, all feasibility-filtered.
std::vector<CandidateNode> enumerate_candidates(const Scene& scene, const SamplingParams& params,
                                                const std::vector<GraspAnnotation>& grasp_set);

}  // namespace repose
