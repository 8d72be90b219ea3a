#include "repose/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

namespace repose {

const char* node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Drooping: return "drooping";
    case NodeKind::Regrasp: return "regrasp";
    case NodeKind::Connecting: return "connecting";
  }
  return "unknown";
}

const char* edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::GraspTransition: return "grasp_transition";
    case EdgeKind::Translation: return "translation";
    case EdgeKind::Regrasp: return "regrasp";
  }
  return "unknown";
}

double EdgeCosts::of(EdgeKind kind) const {
  switch (kind) {
    case EdgeKind::GraspTransition: return grasp_transition;
    case EdgeKind::Translation: return translation;
    case EdgeKind::Regrasp: return regrasp;
  }
  return 0.0;
}

void EdgeCosts::validate() const {
  if (translation < 0.0 || grasp_transition < 0.0 || regrasp < 0.0) {
    raise(ErrorCode::ValidationError, "edge costs must be nonnegative");
  }
}

void ManipulationGraph::rebuild_adjacency() {
  adjacency.assign(nodes.size(), {});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adjacency[static_cast<std::size_t>(edges[i].from)].push_back(static_cast<int>(i));
  }
}

namespace {

struct PivotKey {
  std::int64_t v[6];
  bool operator==(const PivotKey& o) const {
    for (int i = 0; i < 6; ++i) {
      if (v[i] != o.v[i]) return false;
    }
    return true;
  }
};

struct PivotKeyHash {
  std::size_t operator()(const PivotKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int i = 0; i < 6; ++i) {
      h ^= static_cast<std::size_t>(k.v[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

PivotKey pivot_plane_key(const Transform& object_pose) {
  const Eigen::Vector3d pivot = object_pose.translation();
  const Eigen::Vector3d axis = object_pose.x_axis();
  PivotKey key{};
  for (int i = 0; i < 3; ++i) key.v[i] = std::llround(pivot[i] / 1e-5 + 1e-9);
  for (int i = 0; i < 3; ++i) key.v[3 + i] = std::llround(axis[i] / 1e-5 + 1e-9);
  return key;
}

double pose_inclination(const Transform& object_pose) {
  return std::asin(std::clamp(object_pose.y_axis().z(), -1.0, 1.0));
}

struct LatticeKey {
  int grasp_id;
  int ix;
  int iy;
  int itheta;
  int izeta;
  bool operator==(const LatticeKey& o) const {
    return grasp_id == o.grasp_id && ix == o.ix && iy == o.iy && itheta == o.itheta &&
           izeta == o.izeta;
  }
};

struct LatticeKeyHash {
  std::size_t operator()(const LatticeKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.grasp_id);
    for (int v : {k.ix, k.iy, k.itheta, k.izeta}) {
      h = h * 1000003u + static_cast<std::size_t>(v + 512);
    }
    return h;
  }
};

bool kinds_translation_compatible(NodeKind a, NodeKind b) {
  const bool a_droop = a == NodeKind::Drooping || a == NodeKind::Connecting;
  const bool b_droop = b == NodeKind::Drooping || b == NodeKind::Connecting;
  const bool a_re = a == NodeKind::Regrasp || a == NodeKind::Connecting;
  const bool b_re = b == NodeKind::Regrasp || b == NodeKind::Connecting;
  return (a_droop && b_droop) || (a_re && b_re);
}

int zeta_count(const std::vector<GraphNode>& nodes) {
  int n = 0;
  for (const GraphNode& node : nodes) {
    n = std::max({n, node.candidate.coords.n_zeta, node.candidate.coords.izeta + 1});
  }
  return n;
}

bool zeta_adjacent(int a, int b, int n_zeta) {
  if (a == b) return true;
  const int d = std::abs(a - b);
  if (d == 1) return true;
  return n_zeta >= 3 && d == n_zeta - 1;
}

void append_translation_edges(const Scene& scene, ManipulationGraph& graph,
                              const std::vector<int>& node_ids, const EdgeCosts& costs,
                              bool require_regrasp_side) {
  const int n_zeta = zeta_count(graph.nodes);
  std::unordered_map<LatticeKey, std::vector<int>, LatticeKeyHash> cells;
  for (int id : node_ids) {
    const SampleCoords& c = graph.node(id).candidate.coords;
    cells[LatticeKey{graph.node(id).candidate.grasp.id, c.ix, c.iy, c.itheta, c.izeta}]
        .push_back(id);
  }
  for (auto& [key, ids] : cells) std::sort(ids.begin(), ids.end());

  for (int a_id : node_ids) {
    const GraphNode& a = graph.node(a_id);
    const SampleCoords& ca = a.candidate.coords;
    if (!contact_preserving(scene, a.candidate.object_pose)) continue;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dt = -1; dt <= 1; ++dt) {
          for (int dz = -1; dz <= 1; ++dz) {
            LatticeKey key{a.candidate.grasp.id, ca.ix + dx, ca.iy + dy, ca.itheta + dt,
                           ca.izeta + dz};
            if (n_zeta >= 3) {
              key.izeta = ((key.izeta % n_zeta) + n_zeta) % n_zeta;
            } else if (key.izeta < 0 || key.izeta >= std::max(n_zeta, 1)) {
              continue;
            }
            if (!zeta_adjacent(ca.izeta, key.izeta, n_zeta)) continue;
            auto it = cells.find(key);
            if (it == cells.end()) continue;
            for (int b_id : it->second) {
              if (b_id <= a_id) continue;
              const GraphNode& b = graph.node(b_id);
              if (!kinds_translation_compatible(a.kind, b.kind)) continue;
              if (require_regrasp_side && a.kind != NodeKind::Regrasp &&
                  b.kind != NodeKind::Regrasp) {
                continue;
              }
              if (!contact_preserving(scene, b.candidate.object_pose)) continue;
              graph.edges.push_back({a_id, b_id, EdgeKind::Translation, costs.translation, {}});
              graph.edges.push_back({b_id, a_id, EdgeKind::Translation, costs.translation, {}});
            }
          }
        }
      }
    }
  }
}

}  // namespace

ManipulationGraph build_drooping_graph(const Scene& scene, const std::vector<GraphNode>& nodes,
                                       const EdgeCosts& costs) {
  costs.validate();
  ManipulationGraph graph;
  graph.nodes = nodes;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const GraphNode& n = graph.nodes[i];
    if (n.id != static_cast<int>(i)) {
      raise(ErrorCode::ValidationError, "graph node ids must equal their index");
    }
    if (!n.candidate.feasible) {
      raise(ErrorCode::ValidationError, "graph nodes must be feasible candidates");
    }
    if (n.kind == NodeKind::Regrasp) {
      raise(ErrorCode::ValidationError, "drooping graph accepts drooping/connecting nodes only");
    }
  }

  // Grasp-transition edges: group by shared pivot point and tilt plane.
  std::unordered_map<PivotKey, std::vector<int>, PivotKeyHash> pivots;
  for (const GraphNode& n : graph.nodes) {
    pivots[pivot_plane_key(n.candidate.object_pose)].push_back(n.id);
  }
  std::vector<const std::vector<int>*> groups;
  {
    // Deterministic group order: by smallest member id.
    std::vector<std::pair<int, const std::vector<int>*>> ordered;
    for (const auto& [key, ids] : pivots) ordered.emplace_back(ids.front(), &ids);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [first, ids] : ordered) groups.push_back(ids);
  }
  const double l = scene.object.length;
  for (const std::vector<int>* group : groups) {
    for (std::size_t i = 0; i < group->size(); ++i) {
      for (std::size_t j = i + 1; j < group->size(); ++j) {
        int low_id = (*group)[i];
        int high_id = (*group)[j];
        double theta_low = pose_inclination(graph.node(low_id).candidate.object_pose);
        double theta_high = pose_inclination(graph.node(high_id).candidate.object_pose);
        if (theta_low > theta_high) {
          std::swap(low_id, high_id);
          std::swap(theta_low, theta_high);
        }
        const GraphNode& low = graph.node(low_id);
        const GraphNode& high = graph.node(high_id);
        const double delta = theta_high - theta_low;
        if (delta < 1e-9) continue;
        if (low.candidate.grasp.id == high.candidate.grasp.id) continue;
        // Upward motion slips the grasp toward smaller phi by exactly
        // the tilt change; anything else is not a transition pair.
        if (std::abs((low.candidate.grasp.phi - high.candidate.grasp.phi) - delta) > 1e-9) {
          continue;
        }
        double travel = 0.0;
        try {
          travel = transition_distance_up(l, theta_low, delta);
        } catch (const Error&) {
          continue;
        }
        const double actual = high.candidate.gripper_world.translation().z() -
                              low.candidate.gripper_world.translation().z();
        if (std::abs(actual - travel) > 1e-6) continue;
        // Vertical Cartesian motion keeps the gripper orientation fixed.
        {
          Eigen::AngleAxisd spin(low.candidate.gripper_world.rotation().transpose() *
                                 high.candidate.gripper_world.rotation());
          if (std::abs(spin.angle()) > 1e-6) continue;
        }
        // The conversion only works while the pads slip; probe the low
        // end, the interpolator re-checks every waypoint.
        GraspState low_state{theta_low, low.candidate.grasp.phi,
                             annotation_r_com(scene.object, low.candidate.grasp)};
        if (!droop_occurs(scene, low_state)) continue;
        TransitionCommand up{TransitionDirection::Up, travel, theta_low, delta};
        TransitionCommand down{TransitionDirection::Down,
                               transition_distance_down(l, theta_high, delta), theta_high, delta};
        graph.edges.push_back(
            {low_id, high_id, EdgeKind::GraspTransition, costs.grasp_transition, up});
        graph.edges.push_back(
            {high_id, low_id, EdgeKind::GraspTransition, costs.grasp_transition, down});
      }
    }
  }

  std::vector<int> all_ids(graph.nodes.size());
  for (std::size_t i = 0; i < all_ids.size(); ++i) all_ids[i] = static_cast<int>(i);
  append_translation_edges(scene, graph, all_ids, costs, /*require_regrasp_side=*/false);
  graph.rebuild_adjacency();
  return graph;
}

ManipulationGraph expand_with_regrasp(const Scene& scene, ManipulationGraph graph,
                                      const std::vector<GraphNode>& stable_nodes,
                                      const EdgeCosts& costs) {
  costs.validate();
  std::unordered_map<PoseKey, std::unordered_map<int, int>, PoseKeyHash> by_pose_grasp;
  for (const GraphNode& n : graph.nodes) {
    by_pose_grasp[pose_key(n.candidate.object_pose)][n.candidate.grasp.id] = n.id;
  }

  std::vector<int> stable_ids;
  for (const GraphNode& incoming : stable_nodes) {
    if (!incoming.candidate.feasible) {
      raise(ErrorCode::ValidationError, "stable nodes must be feasible candidates");
    }
    const PoseKey key = pose_key(incoming.candidate.object_pose);
    auto pose_it = by_pose_grasp.find(key);
    if (pose_it != by_pose_grasp.end()) {
      auto grasp_it = pose_it->second.find(incoming.candidate.grasp.id);
      if (grasp_it != pose_it->second.end()) {
        // Pose lives in both the stable set and a bouquet: interchange node.
        GraphNode& existing = graph.nodes[static_cast<std::size_t>(grasp_it->second)];
        existing.kind = NodeKind::Connecting;
        existing.candidate.coords.stable = true;
        stable_ids.push_back(existing.id);
        continue;
      }
    }
    GraphNode fresh = incoming;
    fresh.id = static_cast<int>(graph.nodes.size());
    fresh.kind = NodeKind::Regrasp;
    graph.nodes.push_back(fresh);
    by_pose_grasp[key][fresh.candidate.grasp.id] = fresh.id;
    stable_ids.push_back(fresh.id);
  }

  // Regrasp edges: every grasp pair at a shared stable pose.
  std::unordered_map<PoseKey, std::vector<int>, PoseKeyHash> stable_by_pose;
  for (int id : stable_ids) {
    stable_by_pose[pose_key(graph.node(id).candidate.object_pose)].push_back(id);
  }
  std::vector<std::vector<int>> pose_groups;
  {
    std::vector<std::pair<int, std::vector<int>*>> ordered;
    for (auto& [key, ids] : stable_by_pose) {
      std::sort(ids.begin(), ids.end());
      ordered.emplace_back(ids.front(), &ids);
    }
    std::sort(ordered.begin(), ordered.end());
    for (auto& [first, ids] : ordered) pose_groups.push_back(*ids);
  }
  for (const std::vector<int>& ids : pose_groups) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const GraphNode& a = graph.node(ids[i]);
        const GraphNode& b = graph.node(ids[j]);
        if (a.candidate.grasp.id == b.candidate.grasp.id) continue;
        graph.edges.push_back({a.id, b.id, EdgeKind::Regrasp, costs.regrasp, {}});
        graph.edges.push_back({b.id, a.id, EdgeKind::Regrasp, costs.regrasp, {}});
      }
    }
  }

  // Flat slides between stable poses sharing a grasp. Pairs of
  // connecting nodes already got their edges on the drooping side.
  std::vector<int> regrasp_side;
  for (const GraphNode& n : graph.nodes) {
    if (n.kind == NodeKind::Regrasp || n.kind == NodeKind::Connecting) {
      regrasp_side.push_back(n.id);
    }
  }
  append_translation_edges(scene, graph, regrasp_side, costs, /*require_regrasp_side=*/true);
  graph.rebuild_adjacency();
  return graph;
}

std::vector<GraphNode> make_graph_nodes(const std::vector<CandidateNode>& candidates) {
  std::vector<GraphNode> nodes;
  for (const CandidateNode& c : candidates) {
    if (!c.feasible) continue;
    GraphNode n;
    n.id = static_cast<int>(nodes.size());
    n.candidate = c;
    n.kind = c.kind == CandidateKind::Regrasp ? NodeKind::Regrasp : NodeKind::Drooping;
    nodes.push_back(std::move(n));
  }
  return nodes;
}

namespace {

std::vector<int> resolve_selector(const ManipulationGraph& graph, const NodeSelector& selector,
                                  const char* label) {
  const PoseKey key = pose_key(selector.object_pose);
  std::vector<int> ids;
  for (const GraphNode& n : graph.nodes) {
    if (pose_key(n.candidate.object_pose) == key) ids.push_back(n.id);
  }
  if (ids.empty()) {
    raise(ErrorCode::UnresolvedSelector,
          std::string(label) + " selector matches no feasible node");
  }
  return ids;
}

}  // namespace

PlanPath search_path(const ManipulationGraph& graph, const NodeSelector& start,
                     const NodeSelector& goal) {
  const std::vector<int> start_ids = resolve_selector(graph, start, "start");
  const std::vector<int> goal_ids = resolve_selector(graph, goal, "goal");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.nodes.size(), inf);
  std::vector<int> pred_node(graph.nodes.size(), -1);
  std::vector<int> pred_edge(graph.nodes.size(), -1);

  using QueueItem = std::pair<double, int>;  // (dist, node id)
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>> queue;
  for (int id : start_ids) {
    dist[static_cast<std::size_t>(id)] = 0.0;
    queue.emplace(0.0, id);
  }
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (int edge_idx : graph.adjacency[static_cast<std::size_t>(u)]) {
      const GraphEdge& e = graph.edges[static_cast<std::size_t>(edge_idx)];
      if (graph.edge_blocked(e)) continue;
      const double nd = d + e.cost;
      if (nd < dist[static_cast<std::size_t>(e.to)] - 1e-12) {
        dist[static_cast<std::size_t>(e.to)] = nd;
        pred_node[static_cast<std::size_t>(e.to)] = u;
        pred_edge[static_cast<std::size_t>(e.to)] = edge_idx;
        queue.emplace(nd, e.to);
      }
    }
  }

  int best_goal = -1;
  for (int id : goal_ids) {
    if (dist[static_cast<std::size_t>(id)] == inf) continue;
    if (best_goal == -1 || dist[static_cast<std::size_t>(id)] <
                               dist[static_cast<std::size_t>(best_goal)] - 1e-12 ||
        (std::abs(dist[static_cast<std::size_t>(id)] - dist[static_cast<std::size_t>(best_goal)]) <=
             1e-12 &&
         id < best_goal)) {
      best_goal = id;
    }
  }
  if (best_goal == -1) {
    raise(ErrorCode::NoPath, "start and goal are not connected in the manipulation graph");
  }

  PlanPath path;
  path.total_cost = dist[static_cast<std::size_t>(best_goal)];
  int cursor = best_goal;
  while (cursor != -1) {
    path.node_ids.push_back(cursor);
    const int e = pred_edge[static_cast<std::size_t>(cursor)];
    if (e != -1) path.edge_indices.push_back(e);
    cursor = pred_node[static_cast<std::size_t>(cursor)];
  }
  std::reverse(path.node_ids.begin(), path.node_ids.end());
  std::reverse(path.edge_indices.begin(), path.edge_indices.end());
  for (int e : path.edge_indices) {
    path.edge_counts[graph.edges[static_cast<std::size_t>(e)].kind] += 1;
  }
  return path;
}

ManipulationGraph block_edges(ManipulationGraph graph,
                              const std::vector<std::pair<NodeSelector, NodeSelector>>& pairs) {
  for (const auto& [from_sel, to_sel] : pairs) {
    const std::vector<int> from_ids = resolve_selector(graph, from_sel, "block.from");
    const std::vector<int> to_ids = resolve_selector(graph, to_sel, "block.to");
    for (int a : from_ids) {
      for (int b : to_ids) {
        graph.blocked.insert({a, b});
        graph.blocked.insert({b, a});
      }
    }
  }
  return graph;
}

GraphBuildResult build_manipulation_graph(const Scene& scene, const SamplingParams& params,
                                          const std::vector<GraspAnnotation>& grasp_set,
                                          const EdgeCosts& costs) {
  GraphBuildResult result;
  result.candidates = enumerate_candidates(scene, params, grasp_set);
  std::vector<GraphNode> droop_nodes;
  std::vector<GraphNode> stable_nodes;
  for (const CandidateNode& c : result.candidates) {
    if (!c.feasible) continue;
    GraphNode n;
    n.candidate = c;
    if (c.kind == CandidateKind::Regrasp) {
      n.id = static_cast<int>(stable_nodes.size());
      n.kind = NodeKind::Regrasp;
      stable_nodes.push_back(std::move(n));
    } else {
      n.id = static_cast<int>(droop_nodes.size());
      n.kind = NodeKind::Drooping;
      droop_nodes.push_back(std::move(n));
    }
  }
  result.graph = build_drooping_graph(scene, droop_nodes, costs);
  result.graph = expand_with_regrasp(scene, result.graph, stable_nodes, costs);
  return result;
}

}  // namespace repose
