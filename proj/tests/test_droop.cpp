#include <doctest.h>

#include <random>

#include "repose/droop.hpp"
#include "test_helpers.hpp"

using namespace repose;

namespace {

constexpr double kDeg = M_PI / 180.0;

// Independent route to the torque: the printed two-term form collapses
// algebraically to (mg/2) sin(theta) (r_com + ee cos(phi)).
double torque_oracle(const Scene& scene, const GraspState& gs) {
  return scene.object.mass * scene.gravity / 2.0 * std::sin(gs.theta) *
         (gs.r_com + scene.gripper.ee_length * std::cos(gs.phi));
}

// Product-to-sum route to the transition travel.
double travel_oracle(double l, double theta_init, double theta_target) {
  return 2.0 * l * std::cos(theta_init + theta_target / 2.0) * std::sin(theta_target / 2.0);
}

}  // namespace

TEST_CASE("gravity torque closed form") {
  const Scene scene = testing::stick_scene();

  SUBCASE("zero inclination kills both terms") {
    for (double phi : {0.0, 0.3, 1.2, M_PI}) {
      CHECK(gravity_torque(scene, {0.0, phi, 0.5}) == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
  SUBCASE("upright perpendicular grasp on the catalogued stick") {
    const double t = gravity_torque(scene, {90.0 * kDeg, 90.0 * kDeg, 0.328});
    CHECK(t == doctest::Approx(0.4505).epsilon(2e-4));
    CHECK(t == doctest::Approx(0.28 * 9.81 / 2.0 * 0.328).epsilon(1e-12));
  }
  SUBCASE("30 degree inclination, collinear grasp") {
    const double t = gravity_torque(scene, {30.0 * kDeg, 0.0, 0.328});
    CHECK(t == doctest::Approx(0.3420).epsilon(2e-4));
    CHECK(t == doctest::Approx(0.28 * 9.81 / 2.0 * 0.5 * (0.17 + 0.328)).epsilon(1e-12));
  }
  SUBCASE("matches the independent closed form at random states") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> theta(0.0, M_PI / 2.0);
    std::uniform_real_distribution<double> phi(0.0, M_PI);
    std::uniform_real_distribution<double> r(0.0, 0.6);
    for (int i = 0; i < 1000; ++i) {
      const GraspState gs{theta(rng), phi(rng), r(rng)};
      const double got = gravity_torque(scene, gs);
      const double want = torque_oracle(scene, gs);
      CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
  SUBCASE("monotone in theta, linear in mass and gravity") {
    const GraspState base{0.0, 70.0 * kDeg, 0.33};
    double prev = -1.0;
    for (int i = 0; i <= 90; ++i) {
      GraspState gs = base;
      gs.theta = i * kDeg;
      const double t = gravity_torque(scene, gs);
      CHECK(t >= prev - 1e-12);
      prev = t;
    }
    Scene heavier = scene;
    heavier.object.mass *= 2.0;
    Scene stronger = scene;
    stronger.gravity *= 2.0;
    const GraspState gs{40.0 * kDeg, 60.0 * kDeg, 0.3};
    CHECK(gravity_torque(heavier, gs) ==
          doctest::Approx(2.0 * gravity_torque(scene, gs)).epsilon(1e-12));
    CHECK(gravity_torque(stronger, gs) ==
          doctest::Approx(2.0 * gravity_torque(scene, gs)).epsilon(1e-12));
  }
  SUBCASE("analytic theta derivative agrees with central differences") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> theta(0.05, M_PI / 2.0 - 0.05);
    std::uniform_real_distribution<double> phi(0.0, M_PI);
    std::uniform_real_distribution<double> r(0.05, 0.6);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
      GraspState gs{theta(rng), phi(rng), r(rng)};
      GraspState lo = gs;
      GraspState hi = gs;
      lo.theta -= h;
      hi.theta += h;
      const double fd = (gravity_torque(scene, hi) - gravity_torque(scene, lo)) / (2.0 * h);
      const double analytic = gravity_torque_dtheta(scene, gs);
      CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("droop predicate and threshold") {
  Scene scene = testing::stick_scene();

  SUBCASE("flat gripper never droops") {
    CHECK_FALSE(droop_occurs(scene, {0.0, 90.0 * kDeg, 0.328}));
  }
  SUBCASE("zero friction capacity droops at any positive torque") {
    scene.gripper.pad_friction_torque_limit = 0.0;
    CHECK(droop_occurs(scene, {90.0 * kDeg, 90.0 * kDeg, 0.328}));
  }
  SUBCASE("threshold sits where the closed form says") {
    scene.gripper.pad_friction_torque_limit = 0.2;
    const double threshold = droop_threshold_theta(scene, 90.0 * kDeg, 0.328);
    CHECK(threshold == doctest::Approx(std::asin(0.2 / (0.28 * 9.81 / 2.0 * 0.328))));
    CHECK(threshold == doctest::Approx(26.36 * kDeg).epsilon(1e-3));
    CHECK_FALSE(droop_occurs(scene, {threshold - 1e-4, 90.0 * kDeg, 0.328}));
    CHECK(droop_occurs(scene, {threshold + 1e-4, 90.0 * kDeg, 0.328}));
  }
  SUBCASE("droop is monotone in theta") {
    scene.gripper.pad_friction_torque_limit = 0.1;
    bool seen_true = false;
    for (int i = 0; i <= 90; ++i) {
      const bool d = droop_occurs(scene, {i * kDeg, 90.0 * kDeg, 0.328});
      if (seen_true) CHECK(d);
      seen_true = seen_true || d;
    }
    CHECK(seen_true);
  }
}

TEST_CASE("transition distances") {
  SUBCASE("zero target angle moves nothing") {
    CHECK(transition_distance_up(0.656, 0.4, 0.0) == doctest::Approx(0.0));
    CHECK(transition_distance_down(0.656, 0.4, 0.0) == doctest::Approx(0.0));
  }
  SUBCASE("worked 30 to 75 degree case") {
    const double d = transition_distance_up(0.656, 30.0 * kDeg, 45.0 * kDeg);
    CHECK(d == doctest::Approx(0.3056).epsilon(2e-4));
    CHECK(d == doctest::Approx(travel_oracle(0.656, 30.0 * kDeg, 45.0 * kDeg)).epsilon(1e-12));
    CHECK(transition_distance_down(0.656, 75.0 * kDeg, 45.0 * kDeg) ==
          doctest::Approx(d).epsilon(1e-15));
  }
  SUBCASE("up-then-down round trip is exact") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> length(0.1, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
      const double l = length(rng);
      const double theta = unit(rng) * M_PI / 2.0;
      const double alpha = unit(rng) * (M_PI / 2.0 - theta);
      const double up = transition_distance_up(l, theta, alpha);
      const double down = transition_distance_down(l, theta + alpha, alpha);
      CHECK(std::abs(up - down) <= 1e-12);
      CHECK(up >= -1e-15);
      CHECK(up <= l + 1e-12);
    }
  }
  SUBCASE("angle range violations raise") {
    CHECK_THROWS_AS(transition_distance_up(0.656, 60.0 * kDeg, 45.0 * kDeg), Error);
    CHECK_THROWS_AS(transition_distance_up(0.656, -0.1, 0.2), Error);
    CHECK_THROWS_AS(transition_distance_down(0.656, 30.0 * kDeg, 45.0 * kDeg), Error);
    try {
      transition_distance_down(0.656, 0.2, 0.3);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AngleOutOfRange);
    }
  }
}

TEST_CASE("gripper load share") {
  const Scene scene = testing::stick_scene();
  const double l = scene.object.length;
  const double weight = scene.object.mass * scene.gravity;
  const Eigen::Vector3d pivot(0.3, 0.2, 0.0);
  const Transform flat = Transform::from_translation(pivot);

  SUBCASE("uniform stick grasped at the free end carries half the weight") {
    for (double deg : {10.0, 30.0, 45.0, 60.0, 89.0}) {
      const Transform pose =
          rotate_about_point(flat, pivot, Eigen::Vector3d::UnitX(), deg * kDeg);
      CHECK(gripper_load_share(scene, pose, l) ==
            doctest::Approx(weight / 2.0).epsilon(1e-9));
    }
    CHECK(weight / 2.0 == doctest::Approx(1.3734).epsilon(1e-4));
  }
  SUBCASE("vertical stick resolves through the arc-length ratio") {
    const Transform pose = rotate_about_point(flat, pivot, Eigen::Vector3d::UnitX(), 90.0 * kDeg);
    CHECK(gripper_load_share(scene, pose, l) == doctest::Approx(weight / 2.0).epsilon(1e-9));
  }
  SUBCASE("fully supported object loads nothing") {
    CHECK(gripper_load_share(scene, flat, l) == doctest::Approx(0.0));
  }
  SUBCASE("center of mass at the grasp point loads everything") {
    Scene shifted = testing::stick_scene();
    shifted.object.com_offset = Eigen::Vector3d(0.0, shifted.object.length / 2.0, 0.0);
    const Transform pose = rotate_about_point(flat, pivot, Eigen::Vector3d::UnitX(), 30.0 * kDeg);
    CHECK(gripper_load_share(shifted, pose, l) == doctest::Approx(weight).epsilon(1e-9));
  }
  SUBCASE("grasping at the pivot is degenerate") {
    const Transform pose = rotate_about_point(flat, pivot, Eigen::Vector3d::UnitX(), 30.0 * kDeg);
    CHECK_THROWS_AS(gripper_load_share(scene, pose, 0.0), Error);
  }
}

TEST_CASE("payload checks") {
  Scene scene = testing::duckboard_scene();
  scene.robot.payload = 5.0;
  CHECK(check_payload(scene, 0.0));
  CHECK(check_payload(scene, 5.0));  // boundary inclusive
  const double full = scene.object.mass * scene.gravity;
  CHECK(full == doctest::Approx(9.03).epsilon(1e-3));
  CHECK_FALSE(check_payload(scene, full));
  CHECK(check_payload(scene, full / 2.0));
}
