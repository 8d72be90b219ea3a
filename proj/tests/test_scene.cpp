#include <doctest.h>

#include <string>

#include "repose/scene.hpp"
#include "test_helpers.hpp"

using namespace repose;

#ifndef REPOSE_FIXTURE_DIR
#define REPOSE_FIXTURE_DIR "fixtures"
#endif

namespace {
const std::string kFixtures = REPOSE_FIXTURE_DIR;
constexpr double kDeg = M_PI / 180.0;
}

TEST_CASE("stick fixture loads with the catalogued dimensions") {
  const Scene scene = load_scene(kFixtures + "/stick_scene.ini");
  CHECK(scene.object.shape == ObjectShape::Stick);
  CHECK(scene.object.length == doctest::Approx(0.656).epsilon(1e-12));
  CHECK(scene.object.diameter == doctest::Approx(0.032).epsilon(1e-12));
  CHECK(scene.object.mass == doctest::Approx(0.280).epsilon(1e-12));
  CHECK(scene.gravity == doctest::Approx(9.81));
}

TEST_CASE("duckboard fixture loads") {
  const Scene scene = load_scene(kFixtures + "/duckboard_scene.ini");
  CHECK(scene.object.shape == ObjectShape::Board);
  CHECK(scene.object.length == doctest::Approx(0.750).epsilon(1e-12));
  CHECK(scene.object.width == doctest::Approx(0.330).epsilon(1e-12));
  CHECK(scene.object.thickness == doctest::Approx(0.035).epsilon(1e-12));
  CHECK(scene.object.mass == doctest::Approx(0.920).epsilon(1e-12));
}

TEST_CASE("negative mass is rejected with the field path") {
  std::string text = serialize_scene(testing::stick_scene());
  const std::string needle = "mass = ";
  text.replace(text.find(needle), needle.size() + 4, "mass = -1.0");
  try {
    parse_scene(text, "inline");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("object.mass") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections are rejected") {
  std::string text = serialize_scene(testing::stick_scene());
  CHECK_THROWS_AS(parse_scene(text + "\n[extras]\nfoo = 1\n", "inline"), Error);
  CHECK_THROWS_AS(parse_scene(text + "\nwobble = 3\n", "inline"), Error);
  CHECK_THROWS_AS(parse_scene("[surface]\nheight 0\n", "inline"), Error);
}

TEST_CASE("missing file raises IoError") {
  try {
    load_scene(kFixtures + "/no_such_scene.ini");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("scene serialization round-trips") {
  const Scene scene = load_scene(kFixtures + "/stick_scene.ini");
  const Scene again = parse_scene(serialize_scene(scene), "roundtrip");
  CHECK((again.surface.origin.translation() - scene.surface.origin.translation()).norm() < 1e-12);
  CHECK(again.surface.extent_x == doctest::Approx(scene.surface.extent_x).epsilon(1e-12));
  CHECK(again.object.mass == doctest::Approx(scene.object.mass).epsilon(1e-12));
  CHECK(again.object.length == doctest::Approx(scene.object.length).epsilon(1e-12));
  CHECK(again.gripper.pad_friction_torque_limit ==
        doctest::Approx(scene.gripper.pad_friction_torque_limit).epsilon(1e-12));
  CHECK(again.robot.payload == doctest::Approx(scene.robot.payload).epsilon(1e-12));
  CHECK(again.gravity == doctest::Approx(scene.gravity).epsilon(1e-12));
  CHECK(serialize_scene(again) == serialize_scene(scene));
}

TEST_CASE("friction limit resolves from the pad model when not pinned") {
  Scene scene = testing::stick_scene();
  std::string text = serialize_scene(scene);
  const std::string needle = "pad_friction_torque_limit";
  const std::size_t at = text.find(needle);
  const std::size_t line_end = text.find('\n', at);
  text.erase(at, line_end - at + 1);
  const Scene parsed = parse_scene(text, "inline");
  CHECK(parsed.gripper.pad_friction_torque_limit ==
        doctest::Approx(parsed.gripper.pad_torsion_coefficient * parsed.gripper.grip_force)
            .epsilon(1e-12));
}

TEST_CASE("object lowest point follows the contact skeleton") {
  const Scene scene = testing::stick_scene();
  const double l = scene.object.length;

  SUBCASE("flat stick: any bottom point, tie broken toward -Y") {
    const Transform pose = Transform::from_translation(Eigen::Vector3d(0.3, 0.2, 0.0));
    const Eigen::Vector3d low = object_lowest_point(scene.object, pose);
    CHECK(low.z() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(low.y() == doctest::Approx(0.2).epsilon(1e-12));  // pivot end is nearer -Y
  }
  SUBCASE("tilted stick pivots on the lower end") {
    const Transform pose = rotate_about_point(
        Transform::from_translation(Eigen::Vector3d(0.3, 0.2, 0.0)),
        Eigen::Vector3d(0.3, 0.2, 0.0), Eigen::Vector3d::UnitX(), 45.0 * kDeg);
    const Eigen::Vector3d low = object_lowest_point(scene.object, pose);
    CHECK(low.isApprox(Eigen::Vector3d(0.3, 0.2, 0.0), 1e-9));
  }
  SUBCASE("stick held above the surface: the axis end is the contact candidate") {
    // The end-cap model collapses the cap to the axis endpoint, so a
    // horizontal stick with its axis at 0.10 m reports exactly 0.10 m.
    const Transform pose = Transform::from_translation(Eigen::Vector3d(0.0, 0.1, 0.10));
    CHECK(object_lowest_point(scene.object, pose).z() == doctest::Approx(0.10).epsilon(1e-12));
  }
  SUBCASE("board reports its lowest corner") {
    const Scene board = testing::duckboard_scene();
    const Transform pose = rotate_about_point(
        Transform::from_translation(Eigen::Vector3d(0.4, 0.2, 0.0)),
        Eigen::Vector3d(0.4, 0.2, 0.0), Eigen::Vector3d::UnitX(), 30.0 * kDeg);
    const Eigen::Vector3d low = object_lowest_point(board.object, pose);
    CHECK(low.z() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(low.x() == doctest::Approx(0.4 - board.object.width / 2.0).epsilon(1e-9));
  }
  (void)l;
}

TEST_CASE("task files validate contact invariants") {
  const Scene scene = testing::stick_scene();

  SUBCASE("well-formed task") {
    const Task task = parse_task(
        "[start]\nx = 0.4\ny = 0.1\nx_rot_deg = 0\nz_rot_deg = 0\n"
        "[goal]\nx = 0.4\ny = 0.1\nx_rot_deg = 45\nz_rot_deg = 0\n",
        "inline", scene);
    CHECK((task.spec.start_pose.translation() - Eigen::Vector3d(0.4, 0.1, 0.0)).norm() < 1e-12);
    const double tip_z = task.spec.goal_pose.apply(Eigen::Vector3d(0, scene.object.length, 0)).z();
    CHECK(tip_z == doctest::Approx(scene.object.length * std::sin(45.0 * kDeg)));
  }
  SUBCASE("contact point outside the extents is rejected") {
    CHECK_THROWS_AS(parse_task("[start]\nx = -0.2\ny = 0.1\n"
                               "[goal]\nx = 0.4\ny = 0.1\n",
                               "inline", scene),
                    Error);
  }
  SUBCASE("blocks parse as pose selector pairs") {
    const Task task = parse_task(
        "[start]\nx = 0.4\ny = 0.1\n[goal]\nx = 0.4\ny = 0.2\n"
        "[block]\nfrom = 0.4 0.1 30 0\nto = 0.4 0.2 75 0\n",
        "inline", scene);
    REQUIRE(task.blocked.size() == 1);
    CHECK(task.blocked[0].first.x_rot == doctest::Approx(30.0 * kDeg));
  }
}
