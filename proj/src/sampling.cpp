#include "repose/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "repose/droop.hpp"

namespace repose {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kHalfPi = M_PI / 2.0;

std::vector<double> sorted_unique(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               values.end());
  return values;
}

int level_index(const std::vector<double>& levels, double value) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (std::abs(levels[i] - value) < 1e-9) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

SamplingParams SamplingParams::defaults() {
  SamplingParams p;
  p.spacing = 0.05;
  for (int d = 0; d <= 90; d += 15) p.x_steps.push_back(d * M_PI / 180.0);
  for (int d = 0; d < 360; d += 30) p.z_steps.push_back(d * M_PI / 180.0);
  for (int d = 0; d < 360; d += 90) p.yaw_steps.push_back(d * M_PI / 180.0);
  return p;
}

std::vector<double> SamplingParams::theta_levels() const {
  std::vector<double> levels = x_steps;
  levels.push_back(0.0);
  return sorted_unique(std::move(levels));
}

std::vector<double> SamplingParams::zeta_levels() const {
  std::vector<double> levels = z_steps;
  levels.insert(levels.end(), yaw_steps.begin(), yaw_steps.end());
  return sorted_unique(std::move(levels));
}

void SamplingParams::validate() const {
  if (spacing <= 0.0) raise(ErrorCode::InvalidSpacing, "sampling spacing must be > 0");
  for (double x : x_steps) {
    if (x < -1e-12 || x > kHalfPi + 1e-12) {
      raise(ErrorCode::StepOutOfRange, "x step outside [0, pi/2]");
    }
  }
  for (double z : z_steps) {
    if (z < -1e-12 || z >= kTwoPi) raise(ErrorCode::StepOutOfRange, "z step outside [0, 2pi)");
  }
  for (double y : yaw_steps) {
    if (y < -1e-12 || y >= kTwoPi) raise(ErrorCode::StepOutOfRange, "yaw step outside [0, 2pi)");
  }
}

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::Unreachable: return "unreachable";
    case RejectReason::Collision: return "collision";
    case RejectReason::Payload: return "payload";
  }
  return "unknown";
}

Bouquet generate_bouquet(const Scene& scene, const PlacementPoint& placement,
                         const std::vector<double>& x_steps, const std::vector<double>& z_steps) {
  for (double x : x_steps) {
    if (x < -1e-12 || x > kHalfPi + 1e-12) {
      raise(ErrorCode::StepOutOfRange, "bouquet x step outside [0, pi/2]");
    }
  }
  for (double z : z_steps) {
    if (z < -1e-12 || z >= kTwoPi) {
      raise(ErrorCode::StepOutOfRange, "bouquet z step outside [0, 2pi)");
    }
  }
  Bouquet bouquet;
  bouquet.placement = placement;
  bouquet.poses.reserve(x_steps.size() * z_steps.size());
  for (double x : x_steps) {
    for (double z : z_steps) {
      BouquetPose bp;
      bp.x_rotation = x;
      bp.z_rotation = z;
      const Eigen::Vector3d point = placement.world_transform.translation();
      const Transform tilted = rotate_about_point(placement.world_transform, point,
                                                  placement.world_transform.x_axis(), x);
      bp.pose = rotate_about_point(tilted, point, placement.world_transform.z_axis(), z);
      if (object_lowest_point(scene.object, bp.pose).z() < scene.surface.height - 1e-6) {
        raise(ErrorCode::ValidationError, "bouquet pose penetrates the support surface");
      }
      bouquet.poses.push_back(std::move(bp));
    }
  }
  return bouquet;
}

namespace {

bool footprint_inside(const Scene& scene, const Transform& pose) {
  for (const Eigen::Vector3d& p : scene.object.contact_points()) {
    const Eigen::Vector3d s = scene.surface.to_surface(pose.apply(p));
    if (s.x() < -1e-9 || s.x() > scene.surface.extent_x + 1e-9 || s.y() < -1e-9 ||
        s.y() > scene.surface.extent_y + 1e-9) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Transform> sample_stable_placements(const Scene& scene,
                                                const std::vector<PlacementPoint>& placements,
                                                const std::vector<double>& yaw_steps) {
  std::vector<Transform> out;
  for (const PlacementPoint& placement : placements) {
    for (double yaw : yaw_steps) {
      const Transform pose =
          rotate_about_point(placement.world_transform, placement.world_transform.translation(),
                             placement.world_transform.z_axis(), yaw);
      if (footprint_inside(scene, pose)) out.push_back(pose);
    }
  }
  return out;
}

std::vector<CandidateNode> annotate_grasps(const Scene& scene, const Transform& object_pose,
                                           const std::vector<GraspAnnotation>& grasp_set) {
  (void)scene;
  std::vector<CandidateNode> out;
  out.reserve(grasp_set.size());
  for (const GraspAnnotation& grasp : grasp_set) {
    CandidateNode c;
    c.object_pose = object_pose;
    c.grasp = grasp;
    c.gripper_world = compose(object_pose, grasp.grasp_in_object);
    out.push_back(std::move(c));
  }
  return out;
}

double gripper_lowest_z(const GripperModel& gripper, const Transform& gripper_world) {
  const Eigen::Vector3d half = gripper.body_box / 2.0;
  const Eigen::Vector3d center =
      gripper_world.apply(Eigen::Vector3d(0.0, 0.0, gripper.body_box.z() / 2.0));
  double drop = 0.0;
  for (int i = 0; i < 3; ++i) {
    drop += half[i] * std::abs(gripper_world.rotation()(2, i));
  }
  const double box_low = center.z() - drop;
  const double tcp_low = gripper_world.apply(gripper.tcp_in_gripper()).z();
  return std::min(box_low, tcp_low);
}

bool contact_preserving(const Scene& scene, const Transform& object_pose, double tol) {
  const Eigen::Vector3d low = object_lowest_point(scene.object, object_pose);
  return std::abs(low.z() - scene.surface.height) <= tol;
}

std::vector<CandidateNode> filter_feasible(const Scene& scene,
                                           const std::vector<CandidateNode>& candidates) {
  std::vector<CandidateNode> out = candidates;
  for (CandidateNode& c : out) {
    c.feasible = true;
    c.reject_reason.reset();
    if (!scene.robot.reachable(c.gripper_world.translation())) {
      c.feasible = false;
      c.reject_reason = RejectReason::Unreachable;
      continue;
    }
    if (gripper_lowest_z(scene.gripper, c.gripper_world) < scene.surface.height - 1e-9) {
      c.feasible = false;
      c.reject_reason = RejectReason::Collision;
      continue;
    }
    double f_grip = 0.0;
    if (c.grasp.grasp_point_offset <= 1e-6) {
      // Grasping at the pivot cannot hold any moment.
      f_grip = std::numeric_limits<double>::infinity();
    } else {
      f_grip = gripper_load_share(scene, c.object_pose, c.grasp.grasp_point_offset);
    }
    if (!check_payload(scene, f_grip)) {
      c.feasible = false;
      c.reject_reason = RejectReason::Payload;
    }
  }
  return out;
}

std::vector<CandidateNode> enumerate_candidates(const Scene& scene, const SamplingParams& params,
                                                const std::vector<GraspAnnotation>& grasp_set) {
  params.validate();
  if (grasp_set.empty()) raise(ErrorCode::ValidationError, "grasp set is empty");
  const std::vector<PlacementPoint> placements = discretize_surface(scene.surface, params.spacing);
  const std::vector<double> thetas = params.theta_levels();
  const std::vector<double> zetas = params.zeta_levels();
  const int nx = static_cast<int>(std::floor(scene.surface.extent_x / params.spacing + 1e-9)) + 1;

  std::vector<CandidateNode> all;
  // Bouquet side, row-major over the grid.
  for (std::size_t pi = 0; pi < placements.size(); ++pi) {
    const PlacementPoint& placement = placements[pi];
    const Bouquet bouquet = generate_bouquet(scene, placement, params.x_steps, params.z_steps);
    for (const BouquetPose& bp : bouquet.poses) {
      std::vector<CandidateNode> annotated = annotate_grasps(scene, bp.pose, grasp_set);
      for (CandidateNode& c : annotated) {
        c.kind = CandidateKind::Drooping;
        c.coords.ix = static_cast<int>(pi) % nx;
        c.coords.iy = static_cast<int>(pi) / nx;
        c.coords.itheta = level_index(thetas, bp.x_rotation);
        c.coords.izeta = level_index(zetas, bp.z_rotation);
        c.coords.n_zeta = static_cast<int>(zetas.size());
        c.coords.u = placement.position.x();
        c.coords.v = placement.position.y();
        c.coords.x_rot = bp.x_rotation;
        c.coords.z_rot = bp.z_rotation;
        c.coords.from_bouquet = true;
        all.push_back(std::move(c));
      }
    }
  }
  // Stable placements for the regrasp side.
  for (std::size_t pi = 0; pi < placements.size(); ++pi) {
    const PlacementPoint& placement = placements[pi];
    for (double yaw : params.yaw_steps) {
      const Transform pose =
          rotate_about_point(placement.world_transform, placement.world_transform.translation(),
                             placement.world_transform.z_axis(), yaw);
      if (!footprint_inside(scene, pose)) continue;
      std::vector<CandidateNode> annotated = annotate_grasps(scene, pose, grasp_set);
      for (CandidateNode& c : annotated) {
        c.kind = CandidateKind::Regrasp;
        c.coords.ix = static_cast<int>(pi) % nx;
        c.coords.iy = static_cast<int>(pi) / nx;
        c.coords.itheta = level_index(thetas, 0.0);
        c.coords.izeta = level_index(zetas, yaw);
        c.coords.n_zeta = static_cast<int>(zetas.size());
        c.coords.u = placement.position.x();
        c.coords.v = placement.position.y();
        c.coords.x_rot = 0.0;
        c.coords.z_rot = yaw;
        c.coords.from_bouquet = false;
        c.coords.stable = true;
        all.push_back(std::move(c));
      }
    }
  }
  return filter_feasible(scene, all);
}

}  // namespace repose
