#include <doctest.h>

#include <cmath>

#include "repose/trajectory.hpp"
#include "test_helpers.hpp"

using namespace repose;

namespace {

constexpr double kDeg = M_PI / 180.0;

GraphNode node_from(const Scene& scene, const Transform& pose, const GraspAnnotation& grasp,
                    NodeKind kind, int id = 0) {
  GraphNode n;
  n.id = id;
  n.kind = kind;
  n.candidate.object_pose = pose;
  n.candidate.grasp = grasp;
  n.candidate.gripper_world = compose(pose, grasp.grasp_in_object);
  n.candidate.feasible = true;
  return n;
}

struct TransitionFixture {
  Scene scene = testing::stick_scene();
  GraphNode low;
  GraphNode high;
  TransitionCommand up;
  TransitionCommand down;

  TransitionFixture() {
    const double l = scene.object.length;
    const Transform flat = object_pose_at(scene.surface, 0.4, 0.1, 0.0, 0.0);
    const Transform pose30 = object_pose_at(scene.surface, 0.4, 0.1, 30.0 * kDeg, 0.0);
    const Transform pose75 = object_pose_at(scene.surface, 0.4, 0.1, 75.0 * kDeg, 0.0);
    (void)flat;
    const GraspAnnotation g90 =
        make_fan_annotation(2, 90.0 * kDeg, l, scene.object.diameter, scene.gripper.ee_length);
    const GraspAnnotation g45 =
        make_fan_annotation(1, 45.0 * kDeg, l, scene.object.diameter, scene.gripper.ee_length);
    low = node_from(scene, pose30, g90, NodeKind::Drooping, 0);
    high = node_from(scene, pose75, g45, NodeKind::Drooping, 1);
    const double d = transition_distance_up(l, 30.0 * kDeg, 45.0 * kDeg);
    up = TransitionCommand{TransitionDirection::Up, d, 30.0 * kDeg, 45.0 * kDeg};
    down = TransitionCommand{TransitionDirection::Down, d, 75.0 * kDeg, 45.0 * kDeg};
  }
};

}  // namespace

TEST_CASE("transition interpolation") {
  TransitionFixture fx;

  SUBCASE("zero travel keeps the start waypoint only") {
    TransitionCommand still{TransitionDirection::Up, 0.0, 30.0 * kDeg, 0.0};
    GraphNode same = fx.low;
    same.id = 1;
    const auto wps = interpolate_transition(fx.scene, fx.low, same, still);
    CHECK(wps.size() == 1);
    CHECK(wps[0].object_pose.approx_equal(fx.low.candidate.object_pose, 1e-12, 1e-12));
  }
  SUBCASE("30 to 75 degrees at 5 mm steps") {
    const auto wps = interpolate_transition(fx.scene, fx.low, fx.high, fx.up);
    // ceil(0.30565 / 0.005) + 1 = 63 uniform height waypoints, densified
    // where the grasp-point chord outruns the 5 mm bound; the 45-degree
    // sweep at radius 0.656 m needs at least 104 intervals.
    CHECK(wps.size() >= 105);
    CHECK(wps.size() <= 400);
    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
      CHECK((wps[i + 1].gripper_pose.translation() - wps[i].gripper_pose.translation()).norm() <=
            0.005 + 1e-9);
    }
    const Eigen::Vector3d pivot = fx.low.candidate.object_pose.translation();
    for (const Waypoint& w : wps) {
      CHECK((w.object_pose.translation() - pivot).norm() <= 1e-6);
      // theta(h): gripper height above the surface maps back to the tilt
      const double h = fx.scene.object.length * std::sin(w.theta);
      const double tip_z =
          w.object_pose.apply(Eigen::Vector3d(0, fx.scene.object.length, 0)).z() -
          fx.scene.surface.height;
      CHECK(std::abs(tip_z - h) <= 1e-6);
      CHECK(w.theta >= 30.0 * kDeg - 1e-9);
      CHECK(w.theta <= 75.0 * kDeg + 1e-9);
      CHECK(w.contact_gap == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(w.f_grip ==
            doctest::Approx(fx.scene.object.mass * fx.scene.gravity / 2.0).epsilon(1e-9));
    }
    // endpoints meet the node grasps
    CHECK(wps.front().grasp.id == fx.low.candidate.grasp.id);
    CHECK(wps.back().grasp.id == fx.high.candidate.grasp.id);
    CHECK(wps.back().gripper_pose.approx_equal(fx.high.candidate.gripper_world, 1e-6, 1e-6));
    // the gripper orientation never changes during the vertical motion
    for (const Waypoint& w : wps) {
      Eigen::AngleAxisd spin(wps.front().gripper_pose.rotation().transpose() *
                             w.gripper_pose.rotation());
      CHECK(std::abs(spin.angle()) <= 1e-9);
    }
  }
  SUBCASE("downward mirror retraces the same profile") {
    const auto ups = interpolate_transition(fx.scene, fx.low, fx.high, fx.up);
    const auto downs = interpolate_transition(fx.scene, fx.high, fx.low, fx.down);
    REQUIRE(ups.size() == downs.size());
    for (std::size_t i = 0; i < ups.size(); ++i) {
      const Waypoint& a = ups[i];
      const Waypoint& b = downs[downs.size() - 1 - i];
      CHECK(a.object_pose.approx_equal(b.object_pose, 1e-9, 1e-9));
      CHECK(a.gripper_pose.approx_equal(b.gripper_pose, 1e-9, 1e-9));
    }
  }
  SUBCASE("slip must stay possible over the whole motion") {
    Scene sticky = fx.scene;
    sticky.gripper.pad_friction_torque_limit = 10.0;
    try {
      interpolate_transition(sticky, fx.low, fx.high, fx.up);
      FAIL("expected DroopConditionViolated");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DroopConditionViolated);
    }
  }
  SUBCASE("waypoint rotation stays under the step bound") {
    // Up to vertical: the arcsin profile steepens, refinement must kick in.
    const double l = fx.scene.object.length;
    const Transform pose45 = object_pose_at(fx.scene.surface, 0.4, 0.1, 45.0 * kDeg, 0.0);
    const Transform pose90 = object_pose_at(fx.scene.surface, 0.4, 0.1, 90.0 * kDeg, 0.0);
    const GraspAnnotation g90 =
        make_fan_annotation(2, 90.0 * kDeg, l, fx.scene.object.diameter, fx.scene.gripper.ee_length);
    const GraspAnnotation g45 =
        make_fan_annotation(1, 45.0 * kDeg, l, fx.scene.object.diameter, fx.scene.gripper.ee_length);
    const GraphNode a = node_from(fx.scene, pose45, g90, NodeKind::Drooping, 0);
    const GraphNode b = node_from(fx.scene, pose90, g45, NodeKind::Drooping, 1);
    const double d = transition_distance_up(l, 45.0 * kDeg, 45.0 * kDeg);
    const auto wps = interpolate_transition(
        fx.scene, a, b, {TransitionDirection::Up, d, 45.0 * kDeg, 45.0 * kDeg});
    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
      Eigen::AngleAxisd delta(wps[i].object_pose.rotation().transpose() *
                              wps[i + 1].object_pose.rotation());
      CHECK(std::abs(delta.angle()) <= 2.0 * kDeg + 1e-9);
    }
  }
}

TEST_CASE("translation interpolation") {
  const Scene scene = testing::stick_scene();
  const double l = scene.object.length;
  const GraspAnnotation g90 =
      make_fan_annotation(2, 90.0 * kDeg, l, scene.object.diameter, scene.gripper.ee_length);

  SUBCASE("identical endpoints collapse to one waypoint") {
    const Transform pose = object_pose_at(scene.surface, 0.4, 0.1, 0.0, 0.0);
    const GraphNode a = node_from(scene, pose, g90, NodeKind::Drooping, 0);
    CHECK(interpolate_translation(scene, a, a).size() == 1);
  }
  SUBCASE("flat 0.2 m slide at 5 mm steps") {
    const GraphNode a =
        node_from(scene, object_pose_at(scene.surface, 0.3, 0.1, 0.0, 0.0), g90,
                  NodeKind::Drooping, 0);
    const GraphNode b =
        node_from(scene, object_pose_at(scene.surface, 0.5, 0.1, 0.0, 0.0), g90,
                  NodeKind::Drooping, 1);
    const auto wps = interpolate_translation(scene, a, b);
    CHECK(wps.size() == 41);
    for (const Waypoint& w : wps) {
      CHECK(w.contact_gap == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(w.f_grip == doctest::Approx(0.0));
      CHECK(w.grasp.id == g90.id);
    }
  }
  SUBCASE("swing about the pivot keeps the pivot planted") {
    const Transform pose_a = object_pose_at(scene.surface, 0.4, 0.1, 45.0 * kDeg, 0.0);
    const Transform pose_b = object_pose_at(scene.surface, 0.4, 0.1, 45.0 * kDeg, 90.0 * kDeg);
    const GraphNode a = node_from(scene, pose_a, g90, NodeKind::Drooping, 0);
    const GraphNode b = node_from(scene, pose_b, g90, NodeKind::Drooping, 1);
    const auto wps = interpolate_translation(scene, a, b);
    REQUIRE(wps.size() > 2);
    for (const Waypoint& w : wps) {
      CHECK((w.object_pose.translation() - pose_a.translation()).norm() <= 1e-6);
      CHECK(w.contact_gap >= -1e-6);
      CHECK(w.contact_gap <= 1e-3);
    }
  }
  SUBCASE("different grasps cannot share a translation edge") {
    const GraspAnnotation g45 =
        make_fan_annotation(1, 45.0 * kDeg, l, scene.object.diameter, scene.gripper.ee_length);
    const GraphNode a =
        node_from(scene, object_pose_at(scene.surface, 0.3, 0.1, 0.0, 0.0), g90,
                  NodeKind::Drooping, 0);
    const GraphNode b =
        node_from(scene, object_pose_at(scene.surface, 0.5, 0.1, 0.0, 0.0), g45,
                  NodeKind::Drooping, 1);
    CHECK_THROWS_AS(interpolate_translation(scene, a, b), Error);
  }
}

TEST_CASE("regrasp interpolation") {
  const Scene scene = testing::stick_scene();
  const double l = scene.object.length;
  const Transform pose = object_pose_at(scene.surface, 0.4, 0.1, 0.0, 0.0);
  const GraspAnnotation g45 =
      make_fan_annotation(1, 45.0 * kDeg, l, scene.object.diameter, scene.gripper.ee_length);
  const GraspAnnotation g90 =
      make_fan_annotation(2, 90.0 * kDeg, l, scene.object.diameter, scene.gripper.ee_length);
  const GraphNode a = node_from(scene, pose, g45, NodeKind::Connecting, 0);
  const GraphNode b = node_from(scene, pose, g90, NodeKind::Connecting, 1);

  SUBCASE("same grasp at both ends is not a regrasp") {
    try {
      interpolate_regrasp(scene, a, a);
      FAIL("expected InvalidEdge");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidEdge);
    }
  }
  SUBCASE("object pose and gripper load stay put through the swap") {
    const RegraspPhases phases = interpolate_regrasp_phases(scene, a, b);
    REQUIRE(!phases.waypoints.empty());
    for (const Waypoint& w : phases.waypoints) {
      CHECK(w.object_pose.approx_equal(pose, 1e-12, 1e-12));
      CHECK(w.f_grip == doctest::Approx(0.0));
    }
    CHECK(phases.waypoints.front().gripper_pose.approx_equal(a.candidate.gripper_world, 1e-9,
                                                             1e-9));
    CHECK(phases.waypoints.back().gripper_pose.approx_equal(b.candidate.gripper_world, 1e-9,
                                                            1e-9));
    // Retreat: clearance 0.05 at 5 mm steps puts the transit start at
    // waypoint 11.
    CHECK(phases.transit_begin == 11);
    for (int i = 0; i < phases.transit_begin; ++i) {
      const Eigen::Vector3d off = phases.waypoints[static_cast<std::size_t>(i)]
                                      .gripper_pose.translation() -
                                  a.candidate.gripper_world.translation();
      CHECK(std::abs(off.norm() - 0.005 * i) <= 1e-9);
    }
  }
}

TEST_CASE("assembled trajectories") {
  TransitionFixture fx;
  const double l = fx.scene.object.length;
  const GraspAnnotation g45 = fx.high.candidate.grasp;

  // Chain: transition up at (0.4, 0.1), then slide the tilted stick to
  // a neighbouring placement.
  ManipulationGraph graph;
  graph.nodes.push_back(fx.low);
  graph.nodes.push_back(fx.high);
  GraphNode target = node_from(
      fx.scene, object_pose_at(fx.scene.surface, 0.8, 0.1, 75.0 * kDeg, 0.0), g45,
      NodeKind::Drooping, 2);
  graph.nodes.push_back(target);
  graph.edges.push_back({0, 1, EdgeKind::GraspTransition, 3.0, fx.up});
  graph.edges.push_back({1, 0, EdgeKind::GraspTransition, 3.0, fx.down});
  graph.edges.push_back({1, 2, EdgeKind::Translation, 1.0, {}});
  graph.edges.push_back({2, 1, EdgeKind::Translation, 1.0, {}});
  graph.rebuild_adjacency();

  SUBCASE("empty path gives an empty trajectory") {
    PlanPath path;
    path.node_ids = {0};
    const Trajectory t = assemble_trajectory(fx.scene, graph, path);
    CHECK(t.segments.empty());
    CHECK(t.waypoint_count() == 0);
  }
  SUBCASE("segments join, verify clean, and respect step bounds") {
    const PlanPath path = search_path(graph, {fx.low.candidate.object_pose},
                                      {target.candidate.object_pose});
    REQUIRE(path.edge_indices.size() == 2);
    const Trajectory t = assemble_trajectory(fx.scene, graph, path);
    REQUIRE(t.segments.size() == 2);
    CHECK(t.segments[0].kind == EdgeKind::GraspTransition);
    CHECK(t.segments[1].kind == EdgeKind::Translation);

    const VerificationReport report = verify_trajectory(fx.scene, t);
    CHECK(report.pass);
    CHECK(report.entries.size() == t.waypoint_count());

    // endpoint fidelity against the plan's node poses
    CHECK(t.segments[0].waypoints.front().object_pose.approx_equal(
        fx.low.candidate.object_pose, 1e-6, 1e-4));
    CHECK(t.segments[1].waypoints.back().object_pose.approx_equal(
        target.candidate.object_pose, 1e-6, 1e-4));

    // step bounds across every consecutive pair, including the seam
    std::vector<Waypoint> all;
    for (const auto& seg : t.segments) {
      all.insert(all.end(), seg.waypoints.begin(), seg.waypoints.end());
    }
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
      CHECK((all[i + 1].gripper_pose.translation() - all[i].gripper_pose.translation()).norm() <=
            0.005 + 1e-9);
      CHECK((all[i + 1].object_pose.translation() - all[i].object_pose.translation()).norm() <=
            0.005 + 1e-9);
      Eigen::AngleAxisd og(all[i].object_pose.rotation().transpose() *
                           all[i + 1].object_pose.rotation());
      CHECK(std::abs(og.angle()) <= 2.0 * kDeg + 1e-9);
      Eigen::AngleAxisd gg(all[i].gripper_pose.rotation().transpose() *
                           all[i + 1].gripper_pose.rotation());
      CHECK(std::abs(gg.angle()) <= 2.0 * kDeg + 1e-9);
    }
  }
  (void)l;
}

TEST_CASE("verification flags bad waypoints") {
  const Scene scene = testing::stick_scene();
  const double l = scene.object.length;
  const GraspAnnotation g90 =
      make_fan_annotation(2, 90.0 * kDeg, l, scene.object.diameter, scene.gripper.ee_length);
  const Transform hover = Transform::from_translation(Eigen::Vector3d(0.4, 0.1, 0.005));

  Trajectory t;
  TrajectorySegment seg;
  seg.kind = EdgeKind::Translation;
  Waypoint w;
  w.object_pose = hover;
  w.grasp = g90;
  w.gripper_pose = compose(hover, g90.grasp_in_object);
  w.contact_gap = 0.005;
  w.theta = 0.0;
  w.f_grip = 1.0;
  seg.waypoints.push_back(w);
  t.segments.push_back(seg);

  const VerificationReport report = verify_trajectory(scene, t);
  CHECK_FALSE(report.pass);
  REQUIRE(report.entries.size() == 1);
  REQUIRE(report.entries[0].violations.size() == 1);
  CHECK(report.entries[0].violations[0] == ViolationKind::ContactLost);
  CHECK(render_verification(report).find("ContactLost") != std::string::npos);
}
