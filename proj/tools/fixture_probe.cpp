// Temporary fixture-search tool: scans robot shell parameters until the
// task fixtures reproduce the intended plan shapes, then prints the
// fixture files. Not part of the shipped build.
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "repose/graph.hpp"
#include "repose/trajectory.hpp"

using namespace repose;

namespace {

constexpr double kDeg = M_PI / 180.0;

Scene base_stick_scene() {
  Scene scene;
  scene.surface.extent_x = 1.2;
  scene.surface.extent_y = 0.8;
  scene.surface.height = 0.0;
  scene.surface.origin = Transform::identity();
  scene.object.name = "stick";
  scene.object.shape = ObjectShape::Stick;
  scene.object.length = 0.656;
  scene.object.diameter = 0.032;
  scene.object.mass = 0.280;
  scene.gripper.ee_length = 0.17;
  scene.gripper.jaw_max_open = 0.085;
  scene.gripper.grip_force = 50.0;
  scene.gripper.pad_torsion_coefficient = 0.001;
  scene.gripper.pad_friction_torque_limit = 0.05;
  scene.gripper.body_box = Eigen::Vector3d(0.06, 0.06, 0.08);
  scene.robot.base_pose = Transform::identity();
  scene.robot.reach_min = 0.0;
  scene.robot.reach_max = 10.0;
  scene.robot.z_min = -10.0;
  scene.robot.z_max = 10.0;
  scene.robot.payload = 30.0;
  scene.gravity = 9.81;
  return scene;
}

struct ShellConfig {
  Eigen::Vector3d base;
  double reach_min;
  double reach_max;
  double z_min;
  double z_max;
};

struct PairInfo {
  Eigen::Vector3d wrist;
  bool collision_ok;
};

struct Requirement {
  int pose_idx;
  int grasp_idx;
  bool feasible;
};

bool shell_ok(const ShellConfig& c, const PairInfo& p) {
  if (!p.collision_ok) return false;
  const double d = (p.wrist - c.base).norm();
  return d >= c.reach_min && d <= c.reach_max && p.wrist.z() >= c.z_min && p.wrist.z() <= c.z_max;
}

struct PatternScan {
  std::vector<Transform> poses;
  std::vector<GraspAnnotation> grasps;
  std::vector<std::vector<PairInfo>> info;  // [pose][grasp]

  void precompute(const Scene& scene) {
    info.assign(poses.size(), {});
    for (std::size_t pi = 0; pi < poses.size(); ++pi) {
      for (const GraspAnnotation& g : grasps) {
        PairInfo pair;
        const Transform grip = compose(poses[pi], g.grasp_in_object);
        pair.wrist = grip.translation();
        pair.collision_ok =
            gripper_lowest_z(scene.gripper, grip) >= scene.surface.height - 1e-9;
        info[pi].push_back(pair);
      }
    }
  }

  bool satisfies(const ShellConfig& c, const std::vector<Requirement>& reqs) const {
    for (const Requirement& r : reqs) {
      const bool f = shell_ok(c, info[static_cast<std::size_t>(r.pose_idx)]
                                     [static_cast<std::size_t>(r.grasp_idx)]);
      if (f != r.feasible) return false;
    }
    return true;
  }
};

std::vector<ShellConfig> scan_configs(const PatternScan& scan,
                                      const std::vector<Requirement>& reqs, int limit) {
  std::vector<ShellConfig> out;
  for (double bx = 0.0; bx <= 1.2001; bx += 0.1) {
    for (double by = -0.6; by <= 1.6001; by += 0.1) {
      for (double bz = 0.0; bz <= 1.2001; bz += 0.2) {
        for (double rmin : {0.0, 0.1, 0.2, 0.3}) {
          for (double rmax = rmin + 0.15; rmax <= 1.4001; rmax += 0.05) {
            for (double zmax : {0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 10.0}) {
              ShellConfig c{Eigen::Vector3d(bx, by, bz), rmin, rmax, -10.0, zmax};
              if (scan.satisfies(c, reqs)) {
                out.push_back(c);
                if (static_cast<int>(out.size()) >= limit) return out;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::string shape_of(const ManipulationGraph& graph, const PlanPath& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < path.edge_indices.size(); ++i) {
    const GraphEdge& e = graph.edges[static_cast<std::size_t>(path.edge_indices[i])];
    if (i) out << ",";
    out << edge_kind_name(e.kind);
  }
  return out.str();
}

std::vector<double> gripper_heights(const ManipulationGraph& graph, const PlanPath& path) {
  std::vector<double> h;
  for (int id : path.node_ids) {
    h.push_back(graph.node(id).candidate.gripper_world.translation().z());
  }
  return h;
}

void describe(const char* label, const ShellConfig& c) {
  std::cout << label << ": base=(" << c.base.x() << ", " << c.base.y() << ", " << c.base.z()
            << ") reach=[" << c.reach_min << ", " << c.reach_max << "] z=[" << c.z_min << ", "
            << c.z_max << "]\n";
}

// ---------------------------------------------------------------- task 1

void probe_task1() {
  Scene scene = base_stick_scene();
  const auto fan = default_grasp_fan(scene.object, scene.gripper);
  SamplingParams params;
  params.spacing = 0.2;
  params.x_steps = {0.0, 30 * kDeg, 75 * kDeg};
  params.z_steps = {0.0};
  params.yaw_steps = {0.0};

  const double P1u = 0.6;
  const double P2u = 0.4;
  const double v = 0.2;

  PatternScan scan;
  scan.grasps = fan;
  scan.poses = {
      object_pose_at(scene.surface, P1u, v, 30 * kDeg, 0),  // 0 start
      object_pose_at(scene.surface, P1u, v, 75 * kDeg, 0),  // 1 mid
      object_pose_at(scene.surface, P2u, v, 75 * kDeg, 0),  // 2 goal
      object_pose_at(scene.surface, P2u, v, 30 * kDeg, 0),  // 3 goal placement low
  };
  scan.precompute(scene);

  // grasp indices: 0:phi0 1:phi45 2:phi90 3:phi135 4:phi180
  std::vector<Requirement> reqs = {
      {0, 2, true},   // start grasp
      {1, 1, true},   // transition target at P1
      {2, 1, true},   // goal grasp
      {0, 1, false},  // no direct tilt with the goal grasp
      {2, 2, false},  // start grasp unusable at the goal
      {3, 2, false},  // no slide-then-transition at the goal placement
  };

  const auto configs = scan_configs(scan, reqs, 4000);
  std::cout << "task1 shell candidates: " << configs.size() << "\n";

  int validated = 0;
  for (const ShellConfig& c : configs) {
    scene.robot.base_pose = Transform::from_translation(c.base);
    scene.robot.reach_min = c.reach_min;
    scene.robot.reach_max = c.reach_max;
    scene.robot.z_min = c.z_min;
    scene.robot.z_max = c.z_max;
    GraphBuildResult build;
    try {
      build = build_manipulation_graph(scene, params, fan);
      const PlanPath path = search_path(build.graph, {scan.poses[0]}, {scan.poses[2]});
      if (shape_of(build.graph, path) != "grasp_transition,translation") continue;
      if (path.node_ids.size() != 3) continue;
      const Trajectory traj = assemble_trajectory(scene, build.graph, path);
      const VerificationReport rep = verify_trajectory(scene, traj);
      if (!rep.pass) continue;
      describe("task1 OK", c);
      std::cout << "  cost=" << path.total_cost << " waypoints=" << traj.waypoint_count() << "\n";
      if (++validated >= 5) break;
    } catch (const Error&) {
      continue;
    }
  }
  if (validated == 0) std::cout << "task1: no validated config\n";
}

// ---------------------------------------------------------------- task 2

void probe_task2() {
  Scene scene = base_stick_scene();
  SamplingParams params;
  params.spacing = 0.2;
  params.x_steps = {0.0, 45 * kDeg, 90 * kDeg};
  params.z_steps = {0.0};
  params.yaw_steps = {0.0};

  const double Pu = 0.4;
  const double Pv = 0.2;

  for (double qz : {0.0}) {
    for (double s2 : {0.35, 0.45, 0.5}) {
      for (double phi3 : {90.0, 135.0}) {
        for (auto [Qu, Qv] : std::vector<std::pair<double,double>>{{0.6, 0.2}, {0.6, 0.4}, {0.4, 0.4}}) {
          std::vector<GraspAnnotation> grasps;
          grasps.push_back(make_fan_annotation(0, 0.0, scene.object.length, scene.object.diameter,
                                               scene.gripper.ee_length));
          grasps.push_back(make_fan_annotation(1, 45 * kDeg, scene.object.length,
                                               scene.object.diameter, scene.gripper.ee_length));
          grasps.push_back(make_fan_annotation(2, 90 * kDeg, scene.object.length,
                                               scene.object.diameter, scene.gripper.ee_length));
          grasps.push_back(make_fan_annotation(3, phi3 * kDeg, s2, scene.object.diameter,
                                               scene.gripper.ee_length));

          const Transform start_pose = object_pose_at(scene.surface, Pu, Pv, 45 * kDeg, 0);
          const Transform mid_pose = object_pose_at(scene.surface, Pu, Pv, 90 * kDeg, 0);
          const Transform entry_pose = object_pose_at(scene.surface, Qu, Qv, 45 * kDeg, qz * kDeg);
          const Transform goal_pose = object_pose_at(scene.surface, Qu, Qv, 90 * kDeg, qz * kDeg);

          PatternScan scan;
          scan.grasps = grasps;
          scan.poses = {start_pose, mid_pose, entry_pose, goal_pose};
          scan.precompute(scene);

          // keeps: start phi90+id3, mid phi45, entry phi45, goal phi0+id3
          // kills: start phi45+phi0, mid id3, goal phi45+phi90
          std::vector<Requirement> reqs = {
              {0, 2, true},  {0, 3, true},  {1, 1, true},  {2, 1, true},
              {3, 0, true},  {3, 3, true},  {0, 1, false}, {0, 0, false},
              {1, 3, false}, {3, 1, false}, {3, 2, false},
          };

          // Direct shell feasibility: every kill below the nearest keep or
          // beyond the farthest keep (or z-banded away).
          int validated = 0;
          long prefilter_hits = 0;
          std::map<std::string, long> fails;
          for (double bx = -0.2; bx <= 1.4001 && validated < 3; bx += 0.05) {
            for (double by = -0.6; by <= 1.4001 && validated < 3; by += 0.05) {
              for (double bz = 0.0; bz <= 1.4001 && validated < 3; bz += 0.1) {
                const Eigen::Vector3d base(bx, by, bz);
                double dmin_keep = 1e9;
                double dmax_keep = 0.0;
                bool keeps_ok = true;
                std::vector<double> kill_d;
                for (const Requirement& r : reqs) {
                  const PairInfo& p =
                      scan.info[static_cast<std::size_t>(r.pose_idx)]
                               [static_cast<std::size_t>(r.grasp_idx)];
                  const double d = (p.wrist - base).norm();
                  if (r.feasible) {
                    if (!p.collision_ok) keeps_ok = false;
                    dmin_keep = std::min(dmin_keep, d);
                    dmax_keep = std::max(dmax_keep, d);
                  } else {
                    kill_d.push_back(p.collision_ok ? d : -1.0);
                  }
                }
                if (!keeps_ok) continue;
                double inner = 0.0;
                double outer = 1e9;
                bool ok = true;
                for (double d : kill_d) {
                  if (d < 0.0) continue;  // already dead by collision
                  if (d < dmin_keep - 0.02) {
                    inner = std::max(inner, d);
                  } else if (d > dmax_keep + 0.02) {
                    outer = std::min(outer, d);
                  } else {
                    ok = false;
                    break;
                  }
                }
                if (!ok) continue;
                ++prefilter_hits;
                ShellConfig c{base, (inner + dmin_keep) / 2.0, (dmax_keep + std::min(outer, dmax_keep + 0.3)) / 2.0,
                              -10.0, 10.0};

                // graph-level validation
                scene.robot.base_pose = Transform::from_translation(c.base);
                scene.robot.reach_min = c.reach_min;
                scene.robot.reach_max = c.reach_max;
                scene.robot.z_min = c.z_min;
                scene.robot.z_max = c.z_max;
                try {
                  GraphBuildResult build = build_manipulation_graph(scene, params, grasps);
                  PlanPath free_path;
                  try {
                    free_path = search_path(build.graph, {start_pose}, {goal_pose});
                  } catch (const Error& e) {
                    fails[std::string("free_search:") + e.what()] += 1;
                    continue;
                  }
                  const int free_tr = free_path.count(EdgeKind::GraspTransition);

                  // wall: goal only from entry, entry only from mid
                  std::vector<std::pair<NodeSelector, NodeSelector>> blocks;
                  auto add_wall = [&](const Transform& target,
                                      const std::vector<Transform>& allowed) {
                    const PoseKey tk = pose_key(target);
                    std::vector<PoseKey> aks;
                    for (const Transform& a : allowed) aks.push_back(pose_key(a));
                    const GraphNode* tn = nullptr;
                    for (const GraphNode& n : build.graph.nodes) {
                      if (pose_key(n.candidate.object_pose) == tk) tn = &n;
                    }
                    if (tn == nullptr) return false;
                    const SampleCoords& tc = tn->candidate.coords;
                    std::set<std::string> seen;
                    for (const GraphNode& n : build.graph.nodes) {
                      const SampleCoords& nc = n.candidate.coords;
                      const int nz = std::max(nc.n_zeta, 1);
                      const int dz = std::abs(nc.izeta - tc.izeta);
                      const bool zadj = dz <= 1 || (nz >= 3 && dz == nz - 1);
                      if (std::abs(nc.ix - tc.ix) > 1 || std::abs(nc.iy - tc.iy) > 1 ||
                          std::abs(nc.itheta - tc.itheta) > 1 || !zadj) {
                        continue;
                      }
                      const PoseKey nk = pose_key(n.candidate.object_pose);
                      if (nk == tk) continue;
                      bool allowed_pose = false;
                      for (const PoseKey& ak : aks) allowed_pose = allowed_pose || nk == ak;
                      if (allowed_pose) continue;
                      std::ostringstream tag;
                      tag << nc.ix << "/" << nc.iy << "/" << nc.itheta << "/" << nc.izeta;
                      if (!seen.insert(tag.str()).second) continue;
                      blocks.push_back({{n.candidate.object_pose}, {target}});
                    }
                    return true;
                  };
                  if (!add_wall(goal_pose, {entry_pose})) { fails["wall_goal"] += 1; continue; }
                  if (!add_wall(entry_pose, {mid_pose, goal_pose})) { fails["wall_entry"] += 1; continue; }
                  ManipulationGraph walled = block_edges(build.graph, blocks);
                  PlanPath path;
                  try {
                    path = search_path(walled, {start_pose}, {goal_pose});
                  } catch (const Error& e) {
                    fails["walled_nopath"] += 1;
                    continue;
                  }
                  if (path.node_ids.size() != 4 ||
                      path.count(EdgeKind::GraspTransition) != 2 ||
                      shape_of(walled, path) != "grasp_transition,translation,grasp_transition") {
                    fails[std::string("shape:") + shape_of(walled, path)] += 1;
                    continue;
                  }
                  const auto h = gripper_heights(walled, path);
                  if (!(h[1] > h[0] && h[2] < h[1] && h[3] > h[2])) { fails["heights"] += 1; continue; }
                  if (!(free_path.total_cost < path.total_cost ||
                        (free_path.total_cost == path.total_cost && free_tr < 2))) {
                    fails["free_not_cheaper"] += 1;
                    continue;
                  }
                  Trajectory traj;
                  try {
                    traj = assemble_trajectory(scene, walled, path);
                  } catch (const Error& e) {
                    fails[std::string("traj:") + error_code_name(e.code())] += 1;
                    continue;
                  }
                  if (!verify_trajectory(scene, traj).pass) { fails["verify"] += 1; continue; }
                  describe("task2 OK", c);
                  std::cout << "  qz=" << qz << " s2=" << s2 << " phi3=" << phi3 << " Q=(" << Qu
                            << "," << Qv << ") blocked_cost=" << path.total_cost
                            << " free_cost=" << free_path.total_cost
                            << " free_shape=" << shape_of(build.graph, free_path)
                            << " blocks=" << blocks.size() << "\n";
                  if (validated == 0) {
                    // emit the task file's block sections
                    std::map<std::string, int> uniq;
                    for (const auto& [from_sel, to_sel] : blocks) {
                      const GraphNode* fn = nullptr;
                      const PoseKey fk = pose_key(from_sel.object_pose);
                      for (const GraphNode& n : build.graph.nodes) {
                        if (pose_key(n.candidate.object_pose) == fk) fn = &n;
                      }
                      const GraphNode* tn = nullptr;
                      const PoseKey tk2 = pose_key(to_sel.object_pose);
                      for (const GraphNode& n : build.graph.nodes) {
                        if (pose_key(n.candidate.object_pose) == tk2) tn = &n;
                      }
                      if (!fn || !tn) continue;
                      std::ostringstream line;
                      const SampleCoords& f = fn->candidate.coords;
                      const SampleCoords& t = tn->candidate.coords;
                      line << "[block]\nfrom = " << f.u << " " << f.v << " " << f.x_rot / kDeg
                           << " " << f.z_rot / kDeg << "\nto = " << t.u << " " << t.v << " "
                           << t.x_rot / kDeg << " " << t.z_rot / kDeg << "\n";
                      uniq[line.str()] = 1;
                    }
                    std::cout << "TASK FILE BLOCKS (" << uniq.size() << "):\n";
                    for (const auto& [line, one] : uniq) std::cout << line;
                  }
                  ++validated;
                } catch (const Error&) {
                  continue;
                }
              }
            }
          }
          if (prefilter_hits > 0) {
            std::cout << "combo qz=" << qz << " s2=" << s2 << " phi3=" << phi3 << " Q=(" << Qu
                      << "," << Qv << ") prefilter=" << prefilter_hits << "\n";
            for (const auto& [k, v] : fails) std::cout << "   " << k << " x" << v << "\n";
          }
          if (validated > 0) return;
        }
      }
    }
  }
  std::cout << "task2: no validated config\n";
}

// ---------------------------------------------------------------- task 3

void probe_task3() {
  Scene scene = base_stick_scene();
  scene.surface.extent_y = 1.0;
  std::vector<GraspAnnotation> grasps;
  grasps.push_back(make_fan_annotation(0, 30 * kDeg, scene.object.length, scene.object.diameter,
                                       scene.gripper.ee_length));
  grasps.push_back(make_fan_annotation(1, 90 * kDeg, scene.object.length, scene.object.diameter,
                                       scene.gripper.ee_length));
  SamplingParams params;
  params.spacing = 0.2;
  params.x_steps = {0.0, 30 * kDeg, 75 * kDeg};
  params.z_steps = {0.0};
  params.yaw_steps = {0.0};

  const double far_u = 0.8;
  const double mid_u = 0.6;
  const double v = 0.2;

  PatternScan scan;
  scan.grasps = grasps;
  scan.poses = {
      object_pose_at(scene.surface, far_u, v, 0, 0),        // 0 start flat
      object_pose_at(scene.surface, mid_u, v, 0, 0),        // 1 regrasp flat
      object_pose_at(scene.surface, mid_u, v, 30 * kDeg, 0),  // 2 tilt
      object_pose_at(scene.surface, mid_u, v, 75 * kDeg, 0),  // 3 goal
      object_pose_at(scene.surface, 0.4, v, 0, 0),          // 4 another flat
      object_pose_at(scene.surface, 1.0, v, 0, 0),          // 5 flat beyond start
  };
  scan.precompute(scene);

  // grasp indices in this set: 0:phi30, 1:phi90
  std::vector<Requirement> reqs = {
      {0, 1, true},   // start holds phi90
      {1, 1, true},   // slide target holds phi90
      {1, 0, true},   // and phi30: the regrasp spot
      {2, 0, true},   // tilt with phi30
      {3, 0, true},   // goal with phi30
      {0, 0, false},  // no phi30 at the start flat
      {3, 1, false},  // goal pose must reject phi90
      {4, 0, false},  // no second regrasp spot nearby
      {5, 0, false},
  };

  const auto configs = scan_configs(scan, reqs, 4000);
  std::cout << "task3 shell candidates: " << configs.size() << "\n";

  int validated = 0;
  std::map<std::string, long> fails;
  for (const ShellConfig& c : configs) {
    scene.robot.base_pose = Transform::from_translation(c.base);
    scene.robot.reach_min = c.reach_min;
    scene.robot.reach_max = c.reach_max;
    scene.robot.z_min = c.z_min;
    scene.robot.z_max = c.z_max;
    try {
      GraphBuildResult build = build_manipulation_graph(scene, params, grasps);
      const PlanPath path = search_path(build.graph, {scan.poses[0]}, {scan.poses[3]});
      const std::string shape = shape_of(build.graph, path);
      if (path.count(EdgeKind::Regrasp) != 1) { fails["shape:" + shape] += 1; continue; }
      const std::size_t regrasp_at = shape.find("regrasp");
      if (regrasp_at == std::string::npos || shape.find("translation") > regrasp_at ||
          shape.rfind("translation") < regrasp_at) {
        fails["order:" + shape] += 1;
        continue;
      }
      Trajectory traj;
      try {
        traj = assemble_trajectory(scene, build.graph, path);
      } catch (const Error& e) {
        fails[std::string("traj:") + error_code_name(e.code())] += 1;
        continue;
      }
      if (!verify_trajectory(scene, traj).pass) { fails["verify"] += 1; continue; }
      describe("task3 OK", c);
      std::cout << "  cost=" << path.total_cost << " shape=" << shape << "\n";
      if (++validated >= 5) break;
    } catch (const Error& e) {
      fails[std::string("error:") + error_code_name(e.code())] += 1;
      continue;
    }
  }
  for (const auto& [k, v] : fails) std::cout << "  " << k << " x" << v << "\n";
  if (validated == 0) std::cout << "task3: no validated config\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  if (which == "task1" || which == "all") probe_task1();
  if (which == "task2" || which == "all") probe_task2();
  if (which == "task3" || which == "all") probe_task3();
  return 0;
}
