#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "repose/config.hpp"
#include "repose/graph.hpp"
#include "repose/graph_cache.hpp"
#include "repose/scene.hpp"
#include "repose/scene_draw.hpp"
#include "repose/trajectory.hpp"

namespace fs = std::filesystem;
using namespace repose;
using nlohmann::json;

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoPath:
      return 3;
    case ErrorCode::DroopConditionViolated:
    case ErrorCode::ContactLost:
    case ErrorCode::ReachExceeded:
    case ErrorCode::CollisionInTransit:
    case ErrorCode::VerificationFailed:
      return 4;
    case ErrorCode::IoError:
      return 5;
    default:
      return 2;  // validation, parsing, selectors, cache mismatches
  }
}

struct RunConfig {
  std::string scene_path;
  std::string task_path;
  std::string grasps_path;
  std::string cache_path;
  std::string out_dir = "out";
  std::string query = "summary";
  std::optional<double> spacing;
  std::optional<std::vector<double>> x_steps_deg;
  std::optional<std::vector<double>> z_steps_deg;
  std::optional<std::vector<double>> yaw_steps_deg;
  std::optional<double> cost_translation;
  std::optional<double> cost_transition;
  std::optional<double> cost_regrasp;
  std::optional<double> step_translation;
  std::optional<double> step_rotation_deg;
  std::optional<double> contact_tol;
  std::optional<double> retreat_clearance;
  std::vector<std::string> block_specs;
  bool frames = false;
  bool emit_json = false;
};

// Values from --config fill the gaps; explicit flags stay in charge.
void apply_config_file(const std::string& path, RunConfig& rc) {
  const ConfigFile file = ConfigFile::parse_file(path);
  file.restrict_sections({"inputs", "sampling", "costs", "interpolation", "output"});
  if (const ConfigSection* s = file.find("inputs")) {
    SectionReader r(file, *s);
    if (auto v = r.get_optional_string("scene"); v && rc.scene_path.empty()) rc.scene_path = *v;
    if (auto v = r.get_optional_string("task"); v && rc.task_path.empty()) rc.task_path = *v;
    if (auto v = r.get_optional_string("grasps"); v && rc.grasps_path.empty()) rc.grasps_path = *v;
    if (auto v = r.get_optional_string("cache"); v && rc.cache_path.empty()) rc.cache_path = *v;
    if (auto v = r.get_optional_string("out"); v && rc.out_dir == "out") rc.out_dir = *v;
    r.finish();
  }
  if (const ConfigSection* s = file.find("sampling")) {
    SectionReader r(file, *s);
    if (auto v = r.get_optional_double("spacing"); v && !rc.spacing) rc.spacing = *v;
    if (r.has("x_steps_deg")) {
      auto v = r.get_double_list("x_steps_deg");
      if (!rc.x_steps_deg) rc.x_steps_deg = v;
    }
    if (r.has("z_steps_deg")) {
      auto v = r.get_double_list("z_steps_deg");
      if (!rc.z_steps_deg) rc.z_steps_deg = v;
    }
    if (r.has("yaw_steps_deg")) {
      auto v = r.get_double_list("yaw_steps_deg");
      if (!rc.yaw_steps_deg) rc.yaw_steps_deg = v;
    }
    r.finish();
  }
  if (const ConfigSection* s = file.find("costs")) {
    SectionReader r(file, *s);
    if (auto v = r.get_optional_double("translation"); v && !rc.cost_translation) {
      rc.cost_translation = *v;
    }
    if (auto v = r.get_optional_double("grasp_transition"); v && !rc.cost_transition) {
      rc.cost_transition = *v;
    }
    if (auto v = r.get_optional_double("regrasp"); v && !rc.cost_regrasp) rc.cost_regrasp = *v;
    r.finish();
  }
  if (const ConfigSection* s = file.find("interpolation")) {
    SectionReader r(file, *s);
    if (auto v = r.get_optional_double("step_translation"); v && !rc.step_translation) {
      rc.step_translation = *v;
    }
    if (auto v = r.get_optional_double("step_rotation_deg"); v && !rc.step_rotation_deg) {
      rc.step_rotation_deg = *v;
    }
    if (auto v = r.get_optional_double("contact_tol"); v && !rc.contact_tol) rc.contact_tol = *v;
    if (auto v = r.get_optional_double("retreat_clearance"); v && !rc.retreat_clearance) {
      rc.retreat_clearance = *v;
    }
    r.finish();
  }
  if (const ConfigSection* s = file.find("output")) {
    SectionReader r(file, *s);
    if (auto v = r.get_optional_double("frames")) rc.frames = rc.frames || *v != 0.0;
    if (auto v = r.get_optional_double("json")) rc.emit_json = rc.emit_json || *v != 0.0;
    r.finish();
  }
}

SamplingParams sampling_from(const RunConfig& rc) {
  SamplingParams params = SamplingParams::defaults();
  if (rc.spacing) params.spacing = *rc.spacing;
  auto to_rad = [](const std::vector<double>& deg) {
    std::vector<double> rad;
    rad.reserve(deg.size());
    for (double d : deg) rad.push_back(d * kDegToRad);
    return rad;
  };
  if (rc.x_steps_deg) params.x_steps = to_rad(*rc.x_steps_deg);
  if (rc.z_steps_deg) params.z_steps = to_rad(*rc.z_steps_deg);
  if (rc.yaw_steps_deg) params.yaw_steps = to_rad(*rc.yaw_steps_deg);
  params.validate();
  return params;
}

EdgeCosts costs_from(const RunConfig& rc) {
  EdgeCosts costs;
  if (rc.cost_translation) costs.translation = *rc.cost_translation;
  if (rc.cost_transition) costs.grasp_transition = *rc.cost_transition;
  if (rc.cost_regrasp) costs.regrasp = *rc.cost_regrasp;
  costs.validate();
  return costs;
}

InterpolationParams interpolation_from(const RunConfig& rc) {
  InterpolationParams params;
  if (rc.step_translation) params.step_translation = *rc.step_translation;
  if (rc.step_rotation_deg) params.step_rotation = *rc.step_rotation_deg * kDegToRad;
  if (rc.contact_tol) params.contact_tol = *rc.contact_tol;
  if (rc.retreat_clearance) params.retreat_clearance = *rc.retreat_clearance;
  params.validate();
  return params;
}

std::string resolve_cache_path(const std::string& path) {
  if (path.empty()) return path;
  if (path.find('/') == std::string::npos) {
    if (const char* dir = std::getenv("REPOSE_CACHE_DIR")) {
      return (fs::path(dir) / path).string();
    }
  }
  return path;
}

std::vector<GraspAnnotation> grasps_from(const RunConfig& rc, const Scene& scene) {
  if (rc.grasps_path.empty()) return default_grasp_fan(scene.object, scene.gripper);
  return load_grasp_set(rc.grasps_path, scene.object, scene.gripper);
}

PoseSpec parse_block_pose(const std::string& text, const std::string& context) {
  const std::vector<double> v = parse_double_list(text, context);
  if (v.size() != 4) {
    raise(ErrorCode::ValidationError, context + ": expected 'x,y,x_rot_deg,z_rot_deg'");
  }
  return PoseSpec{v[0], v[1], v[2] * kDegToRad, v[3] * kDegToRad};
}

std::vector<std::pair<NodeSelector, NodeSelector>> block_selectors(
    const RunConfig& rc, const Scene& scene,
    const std::vector<std::pair<PoseSpec, PoseSpec>>& task_blocks) {
  std::vector<std::pair<NodeSelector, NodeSelector>> out;
  auto to_selector = [&](const PoseSpec& p) {
    return NodeSelector{object_pose_at(scene.surface, p.u, p.v, p.x_rot, p.z_rot)};
  };
  for (const auto& [a, b] : task_blocks) out.emplace_back(to_selector(a), to_selector(b));
  for (const std::string& spec : rc.block_specs) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
      raise(ErrorCode::ValidationError, "--block expects 'x,y,xr,zr:x,y,xr,zr'");
    }
    out.emplace_back(to_selector(parse_block_pose(spec.substr(0, colon), "--block")),
                     to_selector(parse_block_pose(spec.substr(colon + 1), "--block")));
  }
  return out;
}

GraphBuildResult obtain_graph(const RunConfig& rc, const Scene& scene,
                              const std::vector<GraspAnnotation>& grasps,
                              const SamplingParams& sampling, const EdgeCosts& costs) {
  const std::uint64_t hash = scene_build_hash(scene, sampling, grasps, costs);
  const std::string cache = resolve_cache_path(rc.cache_path);
  if (!cache.empty() && fs::exists(cache)) {
    return load_graph_cache(cache, hash);
  }
  return build_manipulation_graph(scene, sampling, grasps, costs);
}

std::string pose_line(const GraphNode& n) {
  const SampleCoords& c = n.candidate.coords;
  std::ostringstream out;
  out << "id=" << n.id << " kind=" << node_kind_name(n.kind) << " u=" << fmt(c.u)
      << " v=" << fmt(c.v) << " x_rot_deg=" << fmt(c.x_rot / kDegToRad)
      << " z_rot_deg=" << fmt(c.z_rot / kDegToRad) << " grasp=" << n.candidate.grasp.id;
  return out.str();
}

std::string render_plan(const ManipulationGraph& graph, const PlanPath& path) {
  std::ostringstream out;
  out << "plan status=ok\n";
  out << "cost = " << fmt(path.total_cost) << "\n";
  out << "critical_poses = " << path.node_ids.size() << "\n";
  out << "edges translation=" << path.count(EdgeKind::Translation)
      << " grasp_transition=" << path.count(EdgeKind::GraspTransition)
      << " regrasp=" << path.count(EdgeKind::Regrasp) << "\n";
  for (std::size_t i = 0; i < path.node_ids.size(); ++i) {
    out << "node " << i << " " << pose_line(graph.node(path.node_ids[i])) << "\n";
    if (i < path.edge_indices.size()) {
      const GraphEdge& e = graph.edges[static_cast<std::size_t>(path.edge_indices[i])];
      out << "edge " << i << " kind=" << edge_kind_name(e.kind) << " cost=" << fmt(e.cost);
      if (e.command) {
        out << " direction=" << (e.command->direction == TransitionDirection::Up ? "up" : "down")
            << " distance=" << fmt(e.command->distance)
            << " theta_init_deg=" << fmt(e.command->theta_init / kDegToRad)
            << " theta_target_deg=" << fmt(e.command->theta_target / kDegToRad);
      }
      out << "\n";
    }
  }
  return out.str();
}

json plan_json(const ManipulationGraph& graph, const PlanPath& path,
               const VerificationReport& report) {
  json nodes = json::array();
  for (int id : path.node_ids) {
    const GraphNode& n = graph.node(id);
    nodes.push_back({{"id", n.id},
                     {"kind", node_kind_name(n.kind)},
                     {"u", n.candidate.coords.u},
                     {"v", n.candidate.coords.v},
                     {"x_rot_deg", n.candidate.coords.x_rot / kDegToRad},
                     {"z_rot_deg", n.candidate.coords.z_rot / kDegToRad},
                     {"grasp", n.candidate.grasp.id}});
  }
  json edges = json::array();
  for (int ei : path.edge_indices) {
    const GraphEdge& e = graph.edges[static_cast<std::size_t>(ei)];
    json je = {{"from", e.from}, {"to", e.to}, {"kind", edge_kind_name(e.kind)}, {"cost", e.cost}};
    if (e.command) {
      je["direction"] = e.command->direction == TransitionDirection::Up ? "up" : "down";
      je["distance"] = e.command->distance;
      je["theta_init_deg"] = e.command->theta_init / kDegToRad;
      je["theta_target_deg"] = e.command->theta_target / kDegToRad;
    }
    edges.push_back(je);
  }
  return json{{"cost", path.total_cost},
              {"critical_poses", path.node_ids.size()},
              {"counts",
               {{"translation", path.count(EdgeKind::Translation)},
                {"grasp_transition", path.count(EdgeKind::GraspTransition)},
                {"regrasp", path.count(EdgeKind::Regrasp)}}},
              {"nodes", nodes},
              {"edges", edges},
              {"verification",
               {{"pass", report.pass},
                {"waypoints", report.entries.size()},
                {"violations", report.violation_count}}}};
}

// Artifacts are composed in memory and only land on disk when every
// stage has succeeded; each file goes through a temp name.
void write_artifacts(const std::string& out_dir,
                     const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) raise(ErrorCode::IoError, "cannot create output directory '" + out_dir + "'");
  for (const auto& [name, content] : files) {
    const fs::path final_path = fs::path(out_dir) / name;
    const fs::path tmp_path = fs::path(out_dir) / (name + ".tmp");
    std::ofstream out(tmp_path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot write '" + tmp_path.string() + "'");
    out << content;
    out.flush();
    if (!out) raise(ErrorCode::IoError, "write failure on '" + tmp_path.string() + "'");
    out.close();
    fs::rename(tmp_path, final_path, ec);
    if (ec) raise(ErrorCode::IoError, "cannot finalize '" + final_path.string() + "'");
  }
}

Waypoint node_waypoint(const Scene& scene, const GraphNode& n) {
  Waypoint w;
  w.object_pose = n.candidate.object_pose;
  w.grasp = n.candidate.grasp;
  w.gripper_pose = n.candidate.gripper_world;
  w.contact_gap =
      object_lowest_point(scene.object, n.candidate.object_pose).z() - scene.surface.height;
  w.theta = std::asin(std::clamp(n.candidate.object_pose.y_axis().z(), -1.0, 1.0));
  w.f_grip = 0.0;
  return w;
}

int cmd_plan(const RunConfig& rc) {
  if (rc.scene_path.empty() || rc.task_path.empty()) {
    raise(ErrorCode::ValidationError, "plan requires --scene and --task");
  }
  const Scene scene = load_scene(rc.scene_path);
  const Task task = load_task(rc.task_path, scene);
  const std::vector<GraspAnnotation> grasps = grasps_from(rc, scene);
  const SamplingParams sampling = sampling_from(rc);
  const EdgeCosts costs = costs_from(rc);
  const InterpolationParams interpolation = interpolation_from(rc);

  GraphBuildResult build = obtain_graph(rc, scene, grasps, sampling, costs);
  build.graph = block_edges(std::move(build.graph), block_selectors(rc, scene, task.blocked));

  const PlanPath path = search_path(build.graph, {task.spec.start_pose}, {task.spec.goal_pose});
  const Trajectory trajectory = assemble_trajectory(scene, build.graph, path, interpolation);
  const VerificationReport report = verify_trajectory(scene, trajectory, interpolation);

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("plan.txt", render_plan(build.graph, path));
  files.emplace_back("trajectory.txt", serialize_trajectory(trajectory));
  files.emplace_back("verification.txt", render_verification(report));
  if (rc.emit_json) {
    files.emplace_back("plan.json", plan_json(build.graph, path, report).dump(2) + "\n");
  }
  if (rc.frames) {
    for (std::size_t i = 0; i < path.node_ids.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%03zu.svg", i);
      const GraphNode& n = build.graph.node(path.node_ids[i]);
      std::ostringstream title;
      title << "critical pose " << i << " (" << node_kind_name(n.kind) << ", grasp "
            << n.candidate.grasp.id << ")";
      files.emplace_back(name, draw_frame(scene, node_waypoint(scene, n), title.str()));
    }
  }
  write_artifacts(rc.out_dir, files);
  std::cout << render_plan(build.graph, path);
  std::cout << "trajectory waypoints=" << trajectory.waypoint_count()
            << " verification=" << (report.pass ? "pass" : "fail") << "\n";
  return 0;
}

int cmd_build_graph(const RunConfig& rc) {
  if (rc.scene_path.empty()) raise(ErrorCode::ValidationError, "build-graph requires --scene");
  if (rc.cache_path.empty()) raise(ErrorCode::ValidationError, "build-graph requires --cache");
  const Scene scene = load_scene(rc.scene_path);
  const std::vector<GraspAnnotation> grasps = grasps_from(rc, scene);
  const SamplingParams sampling = sampling_from(rc);
  const EdgeCosts costs = costs_from(rc);
  const std::uint64_t hash = scene_build_hash(scene, sampling, grasps, costs);

  const GraphBuildResult build = build_manipulation_graph(scene, sampling, grasps, costs);
  save_graph_cache(resolve_cache_path(rc.cache_path), build, hash);

  std::map<std::string, int> node_counts;
  for (const GraphNode& n : build.graph.nodes) node_counts[node_kind_name(n.kind)] += 1;
  std::map<std::string, int> edge_counts;
  for (const GraphEdge& e : build.graph.edges) edge_counts[edge_kind_name(e.kind)] += 1;
  std::map<std::string, int> reject_counts;
  int feasible = 0;
  for (const CandidateNode& c : build.candidates) {
    if (c.feasible) {
      ++feasible;
    } else {
      reject_counts[reject_reason_name(*c.reject_reason)] += 1;
    }
  }
  std::cout << "candidates total=" << build.candidates.size() << " feasible=" << feasible;
  for (const auto& [k, v] : reject_counts) std::cout << " " << k << "=" << v;
  std::cout << "\nnodes total=" << build.graph.nodes.size();
  for (const auto& [k, v] : node_counts) std::cout << " " << k << "=" << v;
  std::cout << "\nedges total=" << build.graph.edges.size();
  for (const auto& [k, v] : edge_counts) std::cout << " " << k << "=" << v;
  std::cout << "\ncache " << resolve_cache_path(rc.cache_path) << "\n";
  return 0;
}

int cmd_inspect(const RunConfig& rc) {
  if (rc.scene_path.empty()) raise(ErrorCode::ValidationError, "inspect requires --scene");
  if (rc.cache_path.empty()) raise(ErrorCode::ValidationError, "inspect requires --cache");
  const Scene scene = load_scene(rc.scene_path);
  const std::vector<GraspAnnotation> grasps = grasps_from(rc, scene);
  const SamplingParams sampling = sampling_from(rc);
  const EdgeCosts costs = costs_from(rc);
  const std::uint64_t hash = scene_build_hash(scene, sampling, grasps, costs);
  GraphBuildResult build = load_graph_cache(resolve_cache_path(rc.cache_path), hash);

  std::vector<std::pair<PoseSpec, PoseSpec>> task_blocks;
  if (!rc.task_path.empty()) task_blocks = load_task(rc.task_path, scene).blocked;
  build.graph = block_edges(std::move(build.graph), block_selectors(rc, scene, task_blocks));
  const ManipulationGraph& graph = build.graph;

  const std::string& q = rc.query;
  auto print_node = [&](const GraphNode& n) { std::cout << "node " << pose_line(n) << "\n"; };
  auto print_edge = [&](const GraphEdge& e) {
    std::cout << "edge " << e.from << "->" << e.to << " kind=" << edge_kind_name(e.kind)
              << " cost=" << fmt(e.cost);
    if (e.command) {
      std::cout << " direction="
                << (e.command->direction == TransitionDirection::Up ? "up" : "down")
                << " distance=" << fmt(e.command->distance);
    }
    if (graph.edge_blocked(e)) std::cout << " blocked";
    std::cout << "\n";
  };

  if (q == "summary") {
    std::map<std::string, int> node_counts;
    for (const GraphNode& n : graph.nodes) node_counts[node_kind_name(n.kind)] += 1;
    std::map<std::string, int> edge_counts;
    int blocked = 0;
    for (const GraphEdge& e : graph.edges) {
      edge_counts[edge_kind_name(e.kind)] += 1;
      if (graph.edge_blocked(e)) ++blocked;
    }
    std::cout << "nodes total=" << graph.nodes.size();
    for (const auto& [k, v] : node_counts) std::cout << " " << k << "=" << v;
    std::cout << "\nedges total=" << graph.edges.size();
    for (const auto& [k, v] : edge_counts) std::cout << " " << k << "=" << v;
    std::cout << " blocked=" << blocked << "\n";
    std::vector<int> comp(graph.nodes.size(), -1);
    int n_comp = 0;
    for (std::size_t seed = 0; seed < graph.nodes.size(); ++seed) {
      if (comp[seed] != -1) continue;
      std::vector<int> stack{static_cast<int>(seed)};
      comp[seed] = n_comp;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int ei : graph.adjacency[static_cast<std::size_t>(u)]) {
          const GraphEdge& e = graph.edges[static_cast<std::size_t>(ei)];
          if (graph.edge_blocked(e)) continue;
          if (comp[static_cast<std::size_t>(e.to)] == -1) {
            comp[static_cast<std::size_t>(e.to)] = n_comp;
            stack.push_back(e.to);
          }
        }
      }
      ++n_comp;
    }
    std::cout << "components = " << n_comp << "\n";
    return 0;
  }
  if (q == "connecting") {
    for (const GraphNode& n : graph.nodes) {
      if (n.kind == NodeKind::Connecting) print_node(n);
    }
    return 0;
  }
  if (q == "blocked") {
    for (const GraphEdge& e : graph.edges) {
      if (graph.edge_blocked(e)) print_edge(e);
    }
    return 0;
  }
  if (q == "transitions") {
    for (const GraphEdge& e : graph.edges) {
      if (e.kind == EdgeKind::GraspTransition) print_edge(e);
    }
    return 0;
  }
  if (q == "rejected") {
    for (const CandidateNode& c : build.candidates) {
      if (c.feasible) continue;
      std::cout << "candidate reject=" << reject_reason_name(*c.reject_reason)
                << " u=" << fmt(c.coords.u) << " v=" << fmt(c.coords.v)
                << " x_rot_deg=" << fmt(c.coords.x_rot / kDegToRad)
                << " z_rot_deg=" << fmt(c.coords.z_rot / kDegToRad) << " grasp=" << c.grasp.id
                << "\n";
    }
    return 0;
  }
  if (q.rfind("reject:", 0) == 0) {
    const std::string reason = q.substr(7);
    for (const CandidateNode& c : build.candidates) {
      if (!c.feasible && reject_reason_name(*c.reject_reason) == reason) {
        std::cout << "candidate reject=" << reason << " u=" << fmt(c.coords.u)
                  << " v=" << fmt(c.coords.v) << " grasp=" << c.grasp.id << "\n";
      }
    }
    return 0;
  }
  if (q.rfind("kind:", 0) == 0) {
    const std::string kind = q.substr(5);
    for (const GraphNode& n : graph.nodes) {
      if (kind == node_kind_name(n.kind)) print_node(n);
    }
    return 0;
  }
  if (q.rfind("grasp:", 0) == 0) {
    const int id = static_cast<int>(parse_double_strict(q.substr(6), "inspect grasp query"));
    for (const GraphNode& n : graph.nodes) {
      if (n.candidate.grasp.id == id) print_node(n);
    }
    return 0;
  }
  if (q.rfind("node:", 0) == 0) {
    const int id = static_cast<int>(parse_double_strict(q.substr(5), "inspect node query"));
    if (id < 0 || id >= static_cast<int>(graph.nodes.size())) {
      raise(ErrorCode::UnresolvedSelector, "node id " + std::to_string(id) + " does not exist");
    }
    print_node(graph.node(id));
    for (int ei : graph.adjacency[static_cast<std::size_t>(id)]) {
      print_edge(graph.edges[static_cast<std::size_t>(ei)]);
    }
    return 0;
  }
  raise(ErrorCode::UnresolvedSelector, "unknown inspect query '" + q + "'");
}

void add_common_options(CLI::App* cmd, RunConfig& rc, std::string& config_path) {
  cmd->add_option("--config", config_path, "run configuration file");
  cmd->add_option("--scene", rc.scene_path, "scene file");
  cmd->add_option("--grasps", rc.grasps_path, "grasp annotation file");
  cmd->add_option("--cache", rc.cache_path,
                  "graph cache file (bare names resolve under REPOSE_CACHE_DIR)");
  cmd->add_option("--out", rc.out_dir, "output directory");
  cmd->add_option_function<double>(
      "--spacing", [&rc](const double& v) { rc.spacing = v; },
      "placement grid spacing in meters");
  cmd->add_option_function<std::string>(
      "--x-steps", [&rc](const std::string& v) { rc.x_steps_deg = parse_double_list(v, "--x-steps"); },
      "tilt steps in degrees, e.g. '0,15,30'");
  cmd->add_option_function<std::string>(
      "--z-steps", [&rc](const std::string& v) { rc.z_steps_deg = parse_double_list(v, "--z-steps"); },
      "azimuth steps in degrees");
  cmd->add_option_function<std::string>(
      "--yaw-steps",
      [&rc](const std::string& v) { rc.yaw_steps_deg = parse_double_list(v, "--yaw-steps"); },
      "stable placement yaws in degrees");
  cmd->add_option_function<double>(
      "--cost-translation", [&rc](const double& v) { rc.cost_translation = v; },
      "translation edge cost");
  cmd->add_option_function<double>(
      "--cost-transition", [&rc](const double& v) { rc.cost_transition = v; },
      "grasp transition edge cost");
  cmd->add_option_function<double>(
      "--cost-regrasp", [&rc](const double& v) { rc.cost_regrasp = v; }, "regrasp edge cost");
  cmd->add_option_function<double>(
      "--step-translation", [&rc](const double& v) { rc.step_translation = v; },
      "max waypoint translation (m)");
  cmd->add_option_function<double>(
      "--step-rotation", [&rc](const double& v) { rc.step_rotation_deg = v; },
      "max waypoint rotation (deg)");
  cmd->add_option_function<double>(
      "--contact-tol", [&rc](const double& v) { rc.contact_tol = v; },
      "allowed contact hover (m)");
  cmd->add_option_function<double>(
      "--retreat-clearance", [&rc](const double& v) { rc.retreat_clearance = v; },
      "regrasp retreat distance (m)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regrasp + constrained drooping planner for long objects"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string config_path;

  CLI::App* plan = app.add_subcommand("plan", "plan a repose task and emit trajectory artifacts");
  add_common_options(plan, rc, config_path);
  plan->add_option("--task", rc.task_path, "task file with [start] and [goal]");
  plan->add_option("--block", rc.block_specs,
                   "blocked pose pair 'x,y,xr,zr:x,y,xr,zr' (repeatable)");
  plan->add_flag("--frames", rc.frames, "emit one SVG side view per critical pose");
  plan->add_flag("--json", rc.emit_json, "also write plan.json");

  CLI::App* build = app.add_subcommand("build-graph", "build the manipulation graph cache");
  add_common_options(build, rc, config_path);

  CLI::App* inspect = app.add_subcommand("inspect", "query a cached graph");
  add_common_options(inspect, rc, config_path);
  inspect->add_option("--task", rc.task_path, "task file supplying blocked pairs");
  inspect->add_option("--block", rc.block_specs, "blocked pose pair (repeatable)");
  inspect->add_option("--query", rc.query,
                      "summary | connecting | blocked | transitions | rejected | reject:<r> | "
                      "kind:<k> | grasp:<id> | node:<id>");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }
    if (!config_path.empty()) apply_config_file(config_path, rc);
    if (plan->parsed()) return cmd_plan(rc);
    if (build->parsed()) return cmd_build_graph(rc);
    if (inspect->parsed()) return cmd_inspect(rc);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
