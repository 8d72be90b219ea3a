#include <doctest.h>

#include <random>

#include "repose/transform.hpp"
#include "test_helpers.hpp"

using namespace repose;

namespace {
constexpr double kDeg = M_PI / 180.0;
}

TEST_CASE("compose identity and inverse") {
  std::mt19937 rng(7);
  const Transform t = testing::random_transform(rng);
  CHECK(compose(Transform::identity(), t).approx_equal(t, 1e-12, 1e-12));
  CHECK(compose(t, t.inverse()).approx_equal(Transform::identity(), 1e-9, 1e-9));
}

TEST_CASE("two quarter turns make a half turn") {
  const Transform half = compose(Transform::rot_z(90.0 * kDeg), Transform::rot_z(90.0 * kDeg));
  const Eigen::Vector3d mapped = half.apply(Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(mapped.isApprox(Eigen::Vector3d(-1.0, 0.0, 0.0), 1e-12));
  CHECK(half.approx_equal(Transform::rot_z(180.0 * kDeg), 1e-12, 1e-12));
}

TEST_CASE("rotate_about_point basics") {
  std::mt19937 rng(11);
  const Transform pose = testing::random_transform(rng);
  const Eigen::Vector3d point(0.3, -0.2, 0.5);

  SUBCASE("zero angle leaves the pose unchanged") {
    CHECK(rotate_about_point(pose, point, Eigen::Vector3d::UnitZ(), 0.0)
              .approx_equal(pose, 1e-12, 1e-12));
  }
  SUBCASE("rotation about the own origin reduces to a pure rotation") {
    const Transform r = rotate_about_point(Transform::identity(), Eigen::Vector3d::Zero(),
                                           Eigen::Vector3d::UnitZ(), 90.0 * kDeg);
    CHECK(r.approx_equal(Transform::rot_z(90.0 * kDeg), 1e-12, 1e-12));
  }
  SUBCASE("non-unit axis is rejected") {
    CHECK_THROWS_AS(rotate_about_point(pose, point, Eigen::Vector3d(0, 0, 2.0), 0.1), Error);
    try {
      rotate_about_point(pose, point, Eigen::Vector3d(0, 0, 2.0), 0.1);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonUnitAxis);
    }
  }
}

TEST_CASE("stick raised from flat to vertical about the placement X axis") {
  // Stick lying along +Y at a placement point; after a 90 degree turn
  // about the point's X axis it stands along +Z with the pivot unmoved.
  const Eigen::Vector3d placement(0.4, 0.3, 0.0);
  const Transform flat = Transform::from_translation(placement);
  const double l = 0.656;
  const Transform raised =
      rotate_about_point(flat, placement, Eigen::Vector3d::UnitX(), 90.0 * kDeg);
  CHECK((raised.apply(Eigen::Vector3d::Zero()) - placement).norm() < 1e-12);
  const Eigen::Vector3d tip = raised.apply(Eigen::Vector3d(0.0, l, 0.0));
  CHECK(tip.isApprox(placement + Eigen::Vector3d(0.0, 0.0, l), 1e-12));
}

TEST_CASE("orthonormality survives long composition chains") {
  std::mt19937 rng(23);
  Transform chain = Transform::identity();
  for (int i = 0; i < 1000; ++i) {
    chain = compose(chain, testing::random_transform(rng));
    const Eigen::Matrix3d r = chain.rotation();
    CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(std::abs(r.determinant() - 1.0) <= 1e-9);
  }
}

TEST_CASE("rotate_about_point leaves the point fixed") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Transform pose = testing::random_transform(rng);
    const Eigen::Vector3d point(coord(rng), coord(rng), coord(rng));
    const Eigen::Vector3d axis = testing::random_rotation(rng).apply(Eigen::Vector3d::UnitZ());
    const Transform rotated = rotate_about_point(pose, point, axis, angle(rng));
    // The motion maps `point` to itself: apply it to the point expressed
    // in the pose frame.
    const Eigen::Vector3d in_pose = pose.inverse().apply(point);
    CHECK((rotated.apply(in_pose) - point).norm() <= 1e-9);
  }
}

TEST_CASE("surface discretization") {
  SupportSurface surface;
  surface.origin = Transform::identity();
  surface.height = 0.0;

  SUBCASE("corner-aligned 2x2 grid") {
    surface.extent_x = 0.1;
    surface.extent_y = 0.1;
    CHECK(discretize_surface(surface, 0.1).size() == 4);
  }
  SUBCASE("spacing equal to both extents degenerates to the corners") {
    surface.extent_x = 0.25;
    surface.extent_y = 0.25;
    const auto points = discretize_surface(surface, 0.25);
    REQUIRE(points.size() == 4);
    CHECK(points.front().position == Eigen::Vector2d(0.0, 0.0));
    CHECK(points.back().position == Eigen::Vector2d(0.25, 0.25));
  }
  SUBCASE("11 x 7 grid") {
    surface.extent_x = 0.5;
    surface.extent_y = 0.3;
    CHECK(discretize_surface(surface, 0.05).size() == 77);
  }
  SUBCASE("bad spacing") {
    surface.extent_x = 0.5;
    surface.extent_y = 0.3;
    CHECK_THROWS_AS(discretize_surface(surface, 0.0), Error);
    CHECK_THROWS_AS(discretize_surface(surface, -0.1), Error);
    CHECK_THROWS_AS(discretize_surface(surface, 0.31), Error);
  }
  SUBCASE("grid is invariant to the surface world pose") {
    surface.extent_x = 0.5;
    surface.extent_y = 0.3;
    const auto local = discretize_surface(surface, 0.1);
    SupportSurface moved = surface;
    moved.height = 0.4;
    moved.origin = Transform(Transform::rot_z(35.0 * kDeg).rotation(),
                             Eigen::Vector3d(1.0, -2.0, 0.4));
    const auto shifted = discretize_surface(moved, 0.1);
    REQUIRE(local.size() == shifted.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
      CHECK((local[i].position - shifted[i].position).norm() < 1e-12);
      const Eigen::Vector3d expected = moved.to_world(local[i].position.x(), local[i].position.y());
      CHECK((shifted[i].world_transform.translation() - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("pose keys bucket equal poses built along different routes") {
  const Transform a = compose(Transform::rot_z(60.0 * kDeg), Transform::rot_z(30.0 * kDeg));
  const Transform b = Transform::rot_z(90.0 * kDeg);
  CHECK(pose_key(a) == pose_key(b));

  const Transform c = compose(Transform::from_translation(Eigen::Vector3d(0.2, 0, 0)),
                              Transform::rot_x(45.0 * kDeg));
  const Transform d = Transform(Transform::rot_x(45.0 * kDeg).rotation(),
                                Eigen::Vector3d(0.2, 0.0, 0.0));
  CHECK(pose_key(c) == pose_key(d));
  CHECK_FALSE(pose_key(c) == pose_key(b));

  // Opposite-sign quaternions are one rotation.
  Eigen::Quaterniond q(Eigen::AngleAxisd(100.0 * kDeg, Eigen::Vector3d::UnitY()));
  const Transform e(q.toRotationMatrix(), Eigen::Vector3d::Zero());
  Eigen::Quaterniond negated(-q.w(), -q.x(), -q.y(), -q.z());
  const Transform f(negated.toRotationMatrix(), Eigen::Vector3d::Zero());
  CHECK(pose_key(e) == pose_key(f));
}
