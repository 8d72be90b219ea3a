#pragma once

#include <string>

#include "repose/graph.hpp"

namespace repose {

/// Hash over every input the build depends on: the canonical scene
/// serialization, the sampling parameters, the grasp set, and the edge
/// costs. A cache whose recorded hash differs is rejected.
std::uint64_t scene_build_hash(const Scene& scene, const SamplingParams& params,
                               const std::vector<GraspAnnotation>& grasp_set,
                               const EdgeCosts& costs);

std::string serialize_graph_cache(const GraphBuildResult& build, std::uint64_t scene_hash);

void save_graph_cache(const std::string& path, const GraphBuildResult& build,
                      std::uint64_t scene_hash);

/// Throws CacheMismatch when the stored hash differs from expected_hash,
/// ParseError on malformed input.
GraphBuildResult load_graph_cache(const std::string& path, std::uint64_t expected_hash);
GraphBuildResult parse_graph_cache(const std::string& text, const std::string& origin,
                                   std::uint64_t expected_hash);

}  // namespace repose
