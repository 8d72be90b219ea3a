#include "repose/graph_cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace repose {

namespace {

constexpr const char* kMagic = "reposegraph";
constexpr int kVersion = 1;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void fnv_mix(std::uint64_t& h, const std::string& text) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
}

void write_pose(std::ostream& out, const Transform& pose) {
  Eigen::Quaterniond q(pose.rotation());
  out << " " << fmt(pose.translation().x()) << " " << fmt(pose.translation().y()) << " "
      << fmt(pose.translation().z()) << " " << fmt(q.w()) << " " << fmt(q.x()) << " "
      << fmt(q.y()) << " " << fmt(q.z());
}

Transform read_pose(std::istringstream& in, const std::string& context) {
  double t[3];
  double q[4];
  for (double& v : t) {
    if (!(in >> v)) raise(ErrorCode::ParseError, context + ": truncated pose");
  }
  for (double& v : q) {
    if (!(in >> v)) raise(ErrorCode::ParseError, context + ": truncated pose");
  }
  Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  if (std::abs(quat.norm() - 1.0) > 1e-6) {
    raise(ErrorCode::ParseError, context + ": pose quaternion is not unit");
  }
  quat.normalize();
  return Transform(quat.toRotationMatrix(), Eigen::Vector3d(t[0], t[1], t[2]));
}

}  // namespace

std::uint64_t scene_build_hash(const Scene& scene, const SamplingParams& params,
                               const std::vector<GraspAnnotation>& grasp_set,
                               const EdgeCosts& costs) {
  std::uint64_t h = 1469598103934665603ull;
  fnv_mix(h, serialize_scene(scene));
  std::ostringstream extra;
  extra << "spacing " << fmt(params.spacing) << "\nx";
  for (double v : params.x_steps) extra << " " << fmt(v);
  extra << "\nz";
  for (double v : params.z_steps) extra << " " << fmt(v);
  extra << "\nyaw";
  for (double v : params.yaw_steps) extra << " " << fmt(v);
  extra << "\ncosts " << fmt(costs.translation) << " " << fmt(costs.grasp_transition) << " "
        << fmt(costs.regrasp) << "\n";
  fnv_mix(h, extra.str());
  fnv_mix(h, serialize_grasp_set(grasp_set));
  return h;
}

std::string serialize_graph_cache(const GraphBuildResult& build, std::uint64_t scene_hash) {
  std::ostringstream out;
  char hash_buf[20];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(scene_hash));
  out << kMagic << " " << kVersion << " " << hash_buf << "\n";

  out << "candidates " << build.candidates.size() << "\n";
  for (const CandidateNode& c : build.candidates) {
    out << "c " << (c.kind == CandidateKind::Regrasp ? "regrasp" : "drooping");
    write_pose(out, c.object_pose);
    out << " " << c.grasp.id;
    write_pose(out, c.grasp.grasp_in_object);
    out << " " << fmt(c.grasp.phi) << " " << fmt(c.grasp.grasp_point_offset) << " "
        << fmt(c.grasp.jaw_width);
    const SampleCoords& s = c.coords;
    out << " " << s.ix << " " << s.iy << " " << s.itheta << " " << s.izeta << " " << s.n_zeta
        << " " << fmt(s.u) << " " << fmt(s.v) << " " << fmt(s.x_rot) << " " << fmt(s.z_rot) << " "
        << (s.from_bouquet ? 1 : 0) << " " << (s.stable ? 1 : 0);
    out << " " << (c.feasible ? 1 : 0) << " "
        << (c.reject_reason ? reject_reason_name(*c.reject_reason) : "none") << "\n";
  }

  out << "nodes " << build.graph.nodes.size() << "\n";
  for (const GraphNode& n : build.graph.nodes) {
    out << "n " << n.id << " " << node_kind_name(n.kind);
    write_pose(out, n.candidate.object_pose);
    out << " " << n.candidate.grasp.id;
    write_pose(out, n.candidate.grasp.grasp_in_object);
    out << " " << fmt(n.candidate.grasp.phi) << " " << fmt(n.candidate.grasp.grasp_point_offset)
        << " " << fmt(n.candidate.grasp.jaw_width);
    const SampleCoords& s = n.candidate.coords;
    out << " " << s.ix << " " << s.iy << " " << s.itheta << " " << s.izeta << " " << s.n_zeta
        << " " << fmt(s.u) << " " << fmt(s.v) << " " << fmt(s.x_rot) << " " << fmt(s.z_rot) << " "
        << (s.from_bouquet ? 1 : 0) << " " << (s.stable ? 1 : 0) << "\n";
  }

  out << "edges " << build.graph.edges.size() << "\n";
  for (const GraphEdge& e : build.graph.edges) {
    out << "e " << e.from << " " << e.to << " " << edge_kind_name(e.kind) << " " << fmt(e.cost);
    if (e.command) {
      out << " " << (e.command->direction == TransitionDirection::Up ? "up" : "down") << " "
          << fmt(e.command->distance) << " " << fmt(e.command->theta_init) << " "
          << fmt(e.command->theta_target);
    }
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

void save_graph_cache(const std::string& path, const GraphBuildResult& build,
                      std::uint64_t scene_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot write cache '" + path + "'");
  out << serialize_graph_cache(build, scene_hash);
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write failure on cache '" + path + "'");
}

namespace {

CandidateKind parse_candidate_kind(const std::string& word, const std::string& context) {
  if (word == "drooping") return CandidateKind::Drooping;
  if (word == "regrasp") return CandidateKind::Regrasp;
  raise(ErrorCode::ParseError, context + ": bad candidate kind '" + word + "'");
}

NodeKind parse_node_kind(const std::string& word, const std::string& context) {
  if (word == "drooping") return NodeKind::Drooping;
  if (word == "regrasp") return NodeKind::Regrasp;
  if (word == "connecting") return NodeKind::Connecting;
  raise(ErrorCode::ParseError, context + ": bad node kind '" + word + "'");
}

GraspAnnotation read_grasp(std::istringstream& in, const std::string& context) {
  GraspAnnotation g;
  if (!(in >> g.id)) raise(ErrorCode::ParseError, context + ": truncated grasp");
  g.grasp_in_object = read_pose(in, context);
  if (!(in >> g.phi >> g.grasp_point_offset >> g.jaw_width)) {
    raise(ErrorCode::ParseError, context + ": truncated grasp");
  }
  return g;
}

SampleCoords read_coords(std::istringstream& in, const std::string& context) {
  SampleCoords s;
  int from_bouquet = 0;
  int stable = 0;
  if (!(in >> s.ix >> s.iy >> s.itheta >> s.izeta >> s.n_zeta >> s.u >> s.v >> s.x_rot >>
        s.z_rot >> from_bouquet >> stable)) {
    raise(ErrorCode::ParseError, context + ": truncated coords");
  }
  s.from_bouquet = from_bouquet != 0;
  s.stable = stable != 0;
  return s;
}

}  // namespace

GraphBuildResult parse_graph_cache(const std::string& text, const std::string& origin,
                                   std::uint64_t expected_hash) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  std::string hash_hex;
  if (!(in >> magic >> version >> hash_hex) || magic != kMagic) {
    raise(ErrorCode::ParseError, origin + ": not a graph cache file");
  }
  if (version != kVersion) {
    raise(ErrorCode::CacheMismatch, origin + ": unsupported cache version");
  }
  std::uint64_t stored = 0;
  {
    std::istringstream hex(hash_hex);
    hex >> std::hex >> stored;
    if (hex.fail()) raise(ErrorCode::ParseError, origin + ": bad cache hash");
  }
  if (stored != expected_hash) {
    raise(ErrorCode::CacheMismatch,
          origin + ": cache was built from different scene/sampling inputs");
  }

  GraphBuildResult build;
  std::string line;
  std::getline(in, line);  // rest of header line

  auto expect_section = [&](const char* name) -> std::size_t {
    if (!std::getline(in, line)) raise(ErrorCode::ParseError, origin + ": truncated cache");
    std::istringstream ls(line);
    std::string word;
    std::size_t count = 0;
    if (!(ls >> word >> count) || word != name) {
      raise(ErrorCode::ParseError, origin + ": expected '" + name + "' section");
    }
    return count;
  };

  const std::size_t n_candidates = expect_section("candidates");
  build.candidates.reserve(n_candidates);
  for (std::size_t i = 0; i < n_candidates; ++i) {
    if (!std::getline(in, line)) raise(ErrorCode::ParseError, origin + ": truncated candidates");
    std::istringstream ls(line);
    std::string tag;
    std::string kind;
    ls >> tag >> kind;
    if (tag != "c") raise(ErrorCode::ParseError, origin + ": bad candidate line");
    CandidateNode c;
    c.kind = parse_candidate_kind(kind, origin);
    c.object_pose = read_pose(ls, origin);
    c.grasp = read_grasp(ls, origin);
    c.coords = read_coords(ls, origin);
    int feasible = 0;
    std::string reject;
    if (!(ls >> feasible >> reject)) raise(ErrorCode::ParseError, origin + ": bad candidate line");
    c.feasible = feasible != 0;
    if (reject == "unreachable") {
      c.reject_reason = RejectReason::Unreachable;
    } else if (reject == "collision") {
      c.reject_reason = RejectReason::Collision;
    } else if (reject == "payload") {
      c.reject_reason = RejectReason::Payload;
    } else if (reject != "none") {
      raise(ErrorCode::ParseError, origin + ": bad reject reason '" + reject + "'");
    }
    c.gripper_world = compose(c.object_pose, c.grasp.grasp_in_object);
    build.candidates.push_back(std::move(c));
  }

  const std::size_t n_nodes = expect_section("nodes");
  build.graph.nodes.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (!std::getline(in, line)) raise(ErrorCode::ParseError, origin + ": truncated nodes");
    std::istringstream ls(line);
    std::string tag;
    GraphNode n;
    std::string kind;
    ls >> tag >> n.id >> kind;
    if (tag != "n" || n.id != static_cast<int>(i)) {
      raise(ErrorCode::ParseError, origin + ": bad node line");
    }
    n.kind = parse_node_kind(kind, origin);
    n.candidate.kind =
        n.kind == NodeKind::Regrasp ? CandidateKind::Regrasp : CandidateKind::Drooping;
    n.candidate.object_pose = read_pose(ls, origin);
    n.candidate.grasp = read_grasp(ls, origin);
    n.candidate.coords = read_coords(ls, origin);
    n.candidate.feasible = true;
    n.candidate.gripper_world = compose(n.candidate.object_pose, n.candidate.grasp.grasp_in_object);
    build.graph.nodes.push_back(std::move(n));
  }

  const std::size_t n_edges = expect_section("edges");
  build.graph.edges.reserve(n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) {
    if (!std::getline(in, line)) raise(ErrorCode::ParseError, origin + ": truncated edges");
    std::istringstream ls(line);
    std::string tag;
    std::string kind;
    GraphEdge e;
    ls >> tag >> e.from >> e.to >> kind >> e.cost;
    if (tag != "e" || ls.fail()) raise(ErrorCode::ParseError, origin + ": bad edge line");
    if (kind == "grasp_transition") {
      e.kind = EdgeKind::GraspTransition;
      TransitionCommand cmd;
      std::string dir;
      if (!(ls >> dir >> cmd.distance >> cmd.theta_init >> cmd.theta_target)) {
        raise(ErrorCode::ParseError, origin + ": transition edge lacks its command");
      }
      if (dir == "up") {
        cmd.direction = TransitionDirection::Up;
      } else if (dir == "down") {
        cmd.direction = TransitionDirection::Down;
      } else {
        raise(ErrorCode::ParseError, origin + ": bad transition direction '" + dir + "'");
      }
      e.command = cmd;
    } else if (kind == "translation") {
      e.kind = EdgeKind::Translation;
    } else if (kind == "regrasp") {
      e.kind = EdgeKind::Regrasp;
    } else {
      raise(ErrorCode::ParseError, origin + ": bad edge kind '" + kind + "'");
    }
    if (e.from < 0 || e.to < 0 || e.from >= static_cast<int>(n_nodes) ||
        e.to >= static_cast<int>(n_nodes)) {
      raise(ErrorCode::ParseError, origin + ": edge references a missing node");
    }
    build.graph.edges.push_back(std::move(e));
  }
  if (!std::getline(in, line) || line != "end") {
    raise(ErrorCode::ParseError, origin + ": missing end marker");
  }
  build.graph.rebuild_adjacency();
  return build;
}

GraphBuildResult load_graph_cache(const std::string& path, std::uint64_t expected_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open cache '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph_cache(buffer.str(), path, expected_hash);
}

}  // namespace repose
