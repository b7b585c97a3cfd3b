#pragma once

#include <string>

#include "json.hpp"
#include "treeunif/generators.hpp"
#include "treeunif/metric_tree.hpp"
#include "treeunif/rho_metric.hpp"
#include "treeunif/subdivision.hpp"
#include "treeunif/weights.hpp"

namespace treeunif {

using Json = nlohmann::ordered_json;

/// Serialized JSON with two-space indentation and a trailing newline.
std::string dump(const Json& j);

Json tree_to_json(const TreeSpec& spec);
Json generator_to_json(const GeneratorSpec& g);
GeneratorSpec generator_from_json(const Json& j);
/// Accepts {nodes, edges, metric, resolution} or {"generate": {...}}.
TreeSpec tree_spec_from_json(const Json& j);
TreeSpec read_tree_file(const std::string& path);

/// Levels, tiles, weights, the tree and the hierarchy parameters.
Json decomposition_to_json(const TileDecomposition& decomp, const WeightAssignment& wa);

struct LoadedDecomposition {
  DecompPtr decomp;
  WeightsPtr weights;
};

/// Rebuilds tree, tiles and weights from an export and checks that the
/// stored tile ids and weights are reproduced.
LoadedDecomposition decomposition_from_json(const Json& j);

Json skeleton_to_json(const GeodesicSkeleton& sk);
std::string skeleton_to_dot(const GeodesicSkeleton& sk, const MetricTree& tree);

Json check_to_json(const CheckResult& c);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace treeunif
