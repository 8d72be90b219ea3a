#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "repose/droop.hpp"
#include "repose/sampling.hpp"

namespace repose {

enum class NodeKind { Drooping, Regrasp, Connecting };
enum class EdgeKind { GraspTransition, Translation, Regrasp };

const char* node_kind_name(NodeKind kind);
const char* edge_kind_name(EdgeKind kind);

struct EdgeCosts {
  double translation = 1.0;
  double grasp_transition = 3.0;
  double regrasp = 5.0;

  double of(EdgeKind kind) const;
  void validate() const;
};

struct GraphNode {
  int id = 0;
  CandidateNode candidate;  // feasible only
  NodeKind kind = NodeKind::Drooping;
};

/// Directed edge. Translation and regrasp edges come in symmetric pairs;
/// grasp transitions come as an up edge and a mirror down edge, each
/// carrying its own command.
struct GraphEdge {
  int from = 0;
  int to = 0;
  EdgeKind kind = EdgeKind::Translation;
  double cost = 0.0;
  std::optional<TransitionCommand> command;
};

struct ManipulationGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> adjacency;        // node id -> edge indices
  std::set<std::pair<int, int>> blocked;          // node id pairs excluded from search

  const GraphNode& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
  bool edge_blocked(const GraphEdge& e) const {
    return blocked.count({e.from, e.to}) > 0;
  }
  void rebuild_adjacency();
};

struct PlanPath {
  std::vector<int> node_ids;
  std::vector<int> edge_indices;  // directed edges, aligned with node transitions
  double total_cost = 0.0;
  std::map<EdgeKind, int> edge_counts;

  int count(EdgeKind kind) const {
    auto it = edge_counts.find(kind);
    return it == edge_counts.end() ? 0 : it->second;
  }
};

/// Node selector: an object pose; the search fans out over every
/// feasible grasp annotated at that pose.
struct NodeSelector {
  Transform object_pose;
};

/// Drooping-side construction: grasp-transition edges wherever two
/// nodes share a pivot and their inclination/grasp pair satisfies the
/// up/down travel criterion (with the droop condition holding at the
/// low end), and translation edges between lattice-adjacent poses that
/// share a grasp and keep surface contact.
ManipulationGraph build_drooping_graph(const Scene& scene, const std::vector<GraphNode>& nodes,
                                       const EdgeCosts& costs = EdgeCosts());

/// Adds the regrasp side: stable nodes merge into the graph (poses that
/// already exist as flat bouquet members become connecting nodes),
/// regrasp edges join every grasp pair at a shared stable pose, and
/// flat slides between stable poses sharing a grasp become translation
/// edges. Drooping-only and regrasp-only nodes are never joined
/// directly; every crossing runs through a connecting node.
ManipulationGraph expand_with_regrasp(const Scene& scene, ManipulationGraph graph,
                                      const std::vector<GraphNode>& stable_nodes,
                                      const EdgeCosts& costs = EdgeCosts());

/// Minimum-cost path between any feasible start grasp and any feasible
/// goal grasp at the selected poses; deterministic tie-breaking by
/// smallest node id. Throws NoPath / UnresolvedSelector.
PlanPath search_path(const ManipulationGraph& graph, const NodeSelector& start,
                     const NodeSelector& goal);

/// Excludes every edge between the two pose families of each pair from
/// the search. Throws UnresolvedSelector when a pose matches no node.
ManipulationGraph block_edges(ManipulationGraph graph,
                              const std::vector<std::pair<NodeSelector, NodeSelector>>& pairs);

/// Candidate list -> graph nodes (feasible candidates only), preserving
/// enumeration order: bouquet candidates first, then stable ones.
std::vector<GraphNode> make_graph_nodes(const std::vector<CandidateNode>& candidates);

struct GraphBuildResult {
  ManipulationGraph graph;
  std::vector<CandidateNode> candidates;  // full filtered enumeration, for diagnostics
};

/// Full pipeline: enumerate, filter, split bouquet/stable, build, expand.
GraphBuildResult build_manipulation_graph(const Scene& scene, const SamplingParams& params,
                                          const std::vector<GraspAnnotation>& grasp_set,
                                          const EdgeCosts& costs = EdgeCosts());

}  // namespace repose
