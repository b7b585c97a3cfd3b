#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "treeunif/check.hpp"
#include "treeunif/good_points.hpp"
#include "treeunif/metric_tree.hpp"

namespace treeunif {

enum class TileKind { Root, Arc, Leaf };

const char* to_string(TileKind kind) noexcept;

/// Grid interval [from_k, to_k] of one edge, from_k < to_k.
struct Segment {
  std::uint32_t edge = 0;
  std::int32_t from_k = 0;
  std::int32_t to_k = 0;
};

struct Tile {
  std::uint32_t id = 0;
  int level = 0;
  TileKind kind = TileKind::Root;
  std::vector<Segment> segments;
  std::vector<PointRef> boundary;  // sorted by id
  std::optional<std::uint32_t> parent;
  std::vector<std::uint32_t> children;
  double diam = 0.0;
};

struct Chain {
  int level = 0;
  PointRef x, y;
  std::vector<std::uint32_t> tiles;
  std::vector<PointRef> gateways;  // gateways[i] = tiles[i] meet tiles[i+1]
  bool simple = true;
  bool degenerate = false;  // x == y

  std::size_t size() const { return tiles.size(); }
  bool operator==(const Chain& o) const { return level == o.level && tiles == o.tiles && gateways == o.gateways; }
};

struct ValidationFailure {
  char check = 'a';
  std::uint32_t tile = 0;
  std::string detail;
};

struct DeltaReport {
  bool a = true, b = true, c = true, d = true;
  std::size_t checked_a = 0, checked_b = 0, checked_c = 0, checked_d = 0;
  std::vector<ValidationFailure> failures;  // capped per check

  bool ok() const { return a && b && c && d; }
};

struct NeighborStats {
  int K = 0;
  // Per level: histogram of (#same-level tiles meeting a tile, itself included)
  // and of the number of children.
  std::vector<std::map<int, int>> neighbor_hist;
  std::vector<std::map<int, int>> children_hist;
};

struct HierarchyParams {
  double delta = 0.125;
  int depth = 3;
  double beta = 1.0;
  double gamma = 0.5;
};

class TileDecomposition {
 public:
  /// Builds V^1 ⊆ ... ⊆ V^depth by seeded maximal good sets at scales delta^n.
  static std::shared_ptr<const TileDecomposition> build(TreePtr tree, const HierarchyParams& params);
  /// Rebuilds tiles from given vertex sets (used when re-ingesting exports).
  static std::shared_ptr<const TileDecomposition> from_vertex_sets(TreePtr tree, const HierarchyParams& params,
                                                                   std::vector<std::vector<PointRef>> levels);

  const MetricTree& tree() const { return *tree_; }
  TreePtr tree_ptr() const { return tree_; }
  const HierarchyParams& params() const { return params_; }
  int depth() const { return params_.depth; }

  /// V^n, sorted by id; V^0 is empty.
  const std::vector<PointRef>& vertices(int n) const;
  bool is_vertex(PointRef p, int n) const;

  std::size_t tile_count() const { return tiles_.size(); }
  const Tile& tile(std::uint32_t id) const { return tiles_.at(id); }
  const std::vector<Tile>& tiles() const { return tiles_; }
  /// Ids of the n-tiles, ascending.
  std::vector<std::uint32_t> level_tiles(int n) const;
  std::uint32_t root() const { return 0; }

  std::vector<std::uint32_t> tiles_containing(PointRef x, int n) const;
  bool tile_contains(std::uint32_t tile, PointRef x) const;
  /// The (n+1)-tile inside X containing p (p in X).
  std::uint32_t child_containing(std::uint32_t X, PointRef p) const;
  std::uint32_t ancestor(std::uint32_t tile, int level) const;
  bool tiles_intersect(std::uint32_t a, std::uint32_t b) const;
  /// Same-level tiles sharing a vertex with t.
  std::vector<std::uint32_t> neighbors(std::uint32_t t) const;
  /// The two n-tiles containing an n-vertex.
  std::pair<std::uint32_t, std::uint32_t> vertex_tiles(PointRef v, int n) const;

  Chain simple_chain(PointRef x, PointRef y, int n) const;
  Chain refine_chain(const Chain& P) const;
  PointRef exit_vertex(PointRef u, std::uint32_t child) const;

  /// Extremal points (boundary vertices and tree leaves) of a tile.
  std::vector<PointRef> extremal_points(std::uint32_t t) const;
  /// Non-vertex sample in the middle of each segment (or its start when short).
  std::vector<PointRef> segment_midpoints(std::uint32_t t) const;
  /// dd-distance between disjoint same-level tiles.
  double tile_distance(std::uint32_t a, std::uint32_t b) const;

  DeltaReport validate_delta() const;
  /// delta^n <= diam(X) <= 3 beta delta^n for every n-tile, n >= 1, within
  /// one grid spacing.
  CheckResult tile_diameter_check() const;
  /// dist(X,Y) >= delta^n for disjoint n-tiles, within one grid spacing.
  CheckResult tile_separation_check() const;
  NeighborStats neighbor_stats() const;

 private:
  struct Level {
    std::vector<PointRef> vertices;
    std::vector<char> is_vertex;
    std::vector<std::vector<std::int32_t>> cuts;  // per edge, sorted interior vertex indices
    std::vector<std::uint32_t> piece_base;
    std::vector<std::uint32_t> piece_tile;
    std::unordered_map<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>> vtiles;
    std::uint32_t first_tile = 0, tile_count = 0;
  };

  TileDecomposition(TreePtr tree, const HierarchyParams& params);
  void add_level(std::vector<PointRef> V);
  std::uint32_t piece_index(const Level& L, std::uint32_t e, std::int32_t seg) const;
  std::uint32_t segment_tile(int n, std::uint32_t e, std::int32_t seg) const;
  void check_level(int n) const;

  TreePtr tree_;
  HierarchyParams params_;
  std::vector<Level> levels_;
  std::vector<Tile> tiles_;
};

using DecompPtr = std::shared_ptr<const TileDecomposition>;

}  // namespace treeunif
