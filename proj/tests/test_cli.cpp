#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "repose/scene.hpp"
#include "repose/scene_draw.hpp"
#include "repose/grasps.hpp"
#include "test_helpers.hpp"

using namespace repose;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = REPOSE_FIXTURE_DIR;
const std::string kCli = REPOSE_CLI_PATH;
constexpr double kDeg = M_PI / 180.0;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("plan writes the full artifact set and succeeds") {
  fs::remove_all("cli_out1");
  const int rc = run("plan --config " + kFixtures + "/task1_run.ini --scene " + kFixtures +
                     "/task1_scene.ini --task " + kFixtures +
                     "/task1_task.ini --json --frames --out cli_out1");
  CHECK(rc == 0);
  CHECK(fs::exists("cli_out1/plan.txt"));
  CHECK(fs::exists("cli_out1/trajectory.txt"));
  CHECK(fs::exists("cli_out1/verification.txt"));
  CHECK(fs::exists("cli_out1/plan.json"));
  CHECK(fs::exists("cli_out1/frame_000.svg"));
  CHECK(fs::exists("cli_out1/frame_002.svg"));
  const std::string plan = slurp("cli_out1/plan.txt");
  CHECK(plan.find("critical_poses = 3") != std::string::npos);
  CHECK(plan.find("grasp_transition=1") != std::string::npos);
  const std::string verification = slurp("cli_out1/verification.txt");
  CHECK(verification.find("verification pass") != std::string::npos);
}

TEST_CASE("exit codes map the failure families") {
  SUBCASE("missing scene file is an I/O failure") {
    CHECK(run("plan --scene no_such_scene.ini --task " + kFixtures + "/task1_task.ini") == 5);
  }
  SUBCASE("invalid scene content is a validation failure") {
    std::ofstream("cli_bad_scene.ini") << "[surface]\nheight = 0\n";
    CHECK(run("plan --scene cli_bad_scene.ini --task " + kFixtures + "/task1_task.ini") == 2);
  }
  SUBCASE("severed graphs report no path and write nothing") {
    fs::remove_all("cli_out_nopath");
    std::ofstream("cli_nopath_task.ini")
        << "[start]\nx = 0.4\ny = 0.0\nx_rot_deg = 30\nz_rot_deg = 0\n"
        << "[goal]\nx = 0.8\ny = 0.0\nx_rot_deg = 0\nz_rot_deg = 45\n";
    const int rc = run("plan --scene " + kFixtures +
                       "/stick_scene.ini --task cli_nopath_task.ini --spacing 0.4 "
                       "--x-steps 0,30 --z-steps 0 --yaw-steps 45 --out cli_out_nopath");
    CHECK(rc == 3);
    CHECK_FALSE(fs::exists("cli_out_nopath/plan.txt"));
  }
  SUBCASE("unresolved selectors are validation failures") {
    std::ofstream("cli_sel_task.ini")
        << "[start]\nx = 0.41\ny = 0.07\nx_rot_deg = 30\nz_rot_deg = 0\n"
        << "[goal]\nx = 0.4\ny = 0.2\nx_rot_deg = 0\nz_rot_deg = 0\n";
    const int rc = run("plan --config " + kFixtures + "/task1_run.ini --scene " + kFixtures +
                       "/task1_scene.ini --task cli_sel_task.ini");
    CHECK(rc == 2);
  }
}

TEST_CASE("graph caches rebuild identically and reject stale inputs") {
  fs::remove_all("cli_cache_a");
  fs::remove_all("cli_cache_b");
  const std::string common = "build-graph --scene " + kFixtures +
                             "/stick_scene.ini --spacing 0.4 --x-steps 0,30,75 "
                             "--z-steps 0,90 --yaw-steps 0,90 --cache ";
  CHECK(run(common + "cli_cache_a") == 0);
  CHECK(run(common + "cli_cache_b") == 0);
  const std::string a = slurp("cli_cache_a");
  REQUIRE(!a.empty());
  CHECK(a == slurp("cli_cache_b"));

  SUBCASE("inspect with matching inputs") {
    CHECK(run("inspect --scene " + kFixtures +
              "/stick_scene.ini --spacing 0.4 --x-steps 0,30,75 --z-steps 0,90 "
              "--yaw-steps 0,90 --cache cli_cache_a --query summary") == 0);
    CHECK(slurp("cli_stdout.txt").find("components") != std::string::npos);
  }
  SUBCASE("inspect with different sampling rejects the cache") {
    CHECK(run("inspect --scene " + kFixtures +
              "/stick_scene.ini --spacing 0.2 --x-steps 0,30,75 --z-steps 0,90 "
              "--yaw-steps 0,90 --cache cli_cache_a --query summary") == 2);
    CHECK(slurp("cli_stderr.txt").find("CacheMismatch") != std::string::npos);
  }
  SUBCASE("grasp-filtered queries only show that annotation") {
    CHECK(run("inspect --scene " + kFixtures +
              "/stick_scene.ini --spacing 0.4 --x-steps 0,30,75 --z-steps 0,90 "
              "--yaw-steps 0,90 --cache cli_cache_a --query grasp:3") == 0);
    std::istringstream lines(slurp("cli_stdout.txt"));
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      CHECK(line.find("grasp=3") != std::string::npos);
      ++count;
    }
    CHECK(count > 0);
  }
  SUBCASE("connecting nodes are nonempty on the stick fixture") {
    CHECK(run("inspect --scene " + kFixtures +
              "/stick_scene.ini --spacing 0.4 --x-steps 0,30,75 --z-steps 0,90 "
              "--yaw-steps 0,90 --cache cli_cache_a --query connecting") == 0);
    CHECK(slurp("cli_stdout.txt").find("kind=connecting") != std::string::npos);
  }
  SUBCASE("blocked edges show their flag") {
    CHECK(run("inspect --scene " + kFixtures +
              "/stick_scene.ini --spacing 0.4 --x-steps 0,30,75 --z-steps 0,90 "
              "--yaw-steps 0,90 --cache cli_cache_a "
              "--block 0.4,0,30,0:0.4,0,75,0 --query blocked") == 0);
    CHECK(slurp("cli_stdout.txt").find(" blocked") != std::string::npos);
  }
}

TEST_CASE("repeated plans are byte-identical") {
  fs::remove_all("cli_det_a");
  fs::remove_all("cli_det_b");
  const std::string base = "plan --config " + kFixtures + "/task3_run.ini --scene " + kFixtures +
                           "/task3_scene.ini --task " + kFixtures + "/task3_task.ini --grasps " +
                           kFixtures + "/task3_grasps.ini --json --out ";
  CHECK(run(base + "cli_det_a") == 0);
  CHECK(run(base + "cli_det_b") == 0);
  for (const char* name : {"plan.txt", "trajectory.txt", "verification.txt", "plan.json"}) {
    const std::string a = slurp(std::string("cli_det_a/") + name);
    CHECK(!a.empty());
    CHECK(a == slurp(std::string("cli_det_b/") + name));
  }
}

TEST_CASE("frame contact marker sits on the object's lowest point") {
  const Scene scene = testing::stick_scene();
  const auto fan = default_grasp_fan(scene.object, scene.gripper);
  const Transform pose = object_pose_at(scene.surface, 0.5, 0.2, 40.0 * kDeg, 0.0);
  Waypoint w;
  w.object_pose = pose;
  w.grasp = fan[2];
  w.gripper_pose = compose(pose, fan[2].grasp_in_object);
  const FrameStyle style;
  const std::string svg = draw_frame(scene, w, "probe frame", style);

  const std::size_t contact_at = svg.find("id=\"contact\"");
  REQUIRE(contact_at != std::string::npos);
  auto attr = [&](const char* name) {
    const std::string key = std::string(name) + "=\"";
    const std::size_t at = svg.find(key, contact_at);
    REQUIRE(at != std::string::npos);
    return std::stod(svg.substr(at + key.size()));
  };
  const double cx = attr("cx");
  const double cy = attr("cy");

  // Reproject the lowest point with the documented style constants.
  const Eigen::Vector3d low = object_lowest_point(scene.object, pose);
  const double min_x = 0.0;  // axis-aligned surface with origin at zero
  const double max_z = scene.surface.height + scene.object.length + 0.3;
  const double ex = style.margin_px + (low.x() - min_x) * style.pixels_per_meter;
  const double ey = style.margin_px + (max_z - low.z()) * style.pixels_per_meter;
  CHECK(std::abs(cx - ex) <= 1.0);
  CHECK(std::abs(cy - ey) <= 1.0);
}
