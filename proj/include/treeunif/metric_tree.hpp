#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace treeunif {

enum class MetricMode { Geodesic, Snowflake, Table };

const char* to_string(MetricMode mode) noexcept;

struct EdgeSpec {
  std::size_t a = 0;
  std::size_t b = 0;
  double length = 1.0;
};

/// Raw tree description as read from JSON or produced by a generator.
struct TreeSpec {
  std::vector<std::string> nodes;
  std::vector<EdgeSpec> edges;
  MetricMode mode = MetricMode::Geodesic;
  double epsilon_s = 1.0;
  std::vector<std::vector<double>> table;  // node-indexed, table mode only
  int resolution = 64;
};

/// A sample of the grid. Nodes come first (id = node index), then the
/// interior samples of every edge in edge order.
struct PointRef {
  std::uint32_t id = 0;
  auto operator<=>(const PointRef&) const = default;
};

/// Traversal of edge `edge` from grid index from_k to to_k (inclusive).
/// Index 0 is the edge's `a` node and index g its `b` node.
struct EdgeSpan {
  std::uint32_t edge = 0;
  std::int32_t from_k = 0;
  std::int32_t to_k = 0;
};

struct Arc {
  PointRef first;
  PointRef second;
  std::vector<PointRef> trace;

  bool degenerate() const { return trace.size() <= 1; }
};

enum class PointKind { Leaf, Double, Branch };

const char* to_string(PointKind kind) noexcept;

struct BranchData {
  PointRef at;
  std::vector<double> branch_diams;  // descending
  PointKind kind = PointKind::Leaf;

  /// Smaller branch of a double point, 0 otherwise.
  double D() const { return kind == PointKind::Double ? branch_diams[1] : 0.0; }
  /// Third largest branch of a branch point, 0 otherwise.
  double H() const { return kind == PointKind::Branch ? branch_diams[2] : 0.0; }
};

struct DoublingEstimate {
  int packing = 0;  // largest greedy lambda*s separated set found in a ball
  int exponent = 1;
  long long N = 0;  // packing^exponent
};

class MetricTree {
 public:
  explicit MetricTree(TreeSpec spec);

  static std::shared_ptr<const MetricTree> build(TreeSpec spec) {
    return std::make_shared<const MetricTree>(std::move(spec));
  }

  const TreeSpec& spec() const { return spec_; }
  MetricMode mode() const { return spec_.mode; }
  double scale() const { return scale_; }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t sample_count() const { return sample_edge_.size(); }

  std::uint32_t edge_a(std::uint32_t e) const { return edges_[e].a; }
  std::uint32_t edge_b(std::uint32_t e) const { return edges_[e].b; }
  int grid_size(std::uint32_t e) const { return edges_[e].g; }
  double edge_length(std::uint32_t e) const { return edges_[e].len; }

  bool is_node(PointRef p) const { return p.id < node_count_; }
  /// Edge of an interior sample.
  std::uint32_t edge_of(PointRef p) const { return sample_edge_[p.id]; }
  /// Grid index of an interior sample on its edge.
  int k_of(PointRef p) const { return sample_k_[p.id]; }
  /// Sample at grid index k of edge e; k = 0 and k = g give the end nodes.
  PointRef edge_point(std::uint32_t e, int k) const;
  /// Nearest grid sample to parameter t in [0,1] along edge e.
  PointRef point_at(std::uint32_t e, double t) const;
  std::string describe(PointRef p) const;
  void check_point(PointRef p) const;

  const std::vector<std::uint32_t>& neighbors(PointRef p) const { return adj_[p.id]; }
  int degree(PointRef p) const { return static_cast<int>(adj_[p.id].size()); }

  std::vector<EdgeSpan> spans_between(PointRef x, PointRef y) const;
  Arc arc_between(PointRef x, PointRef y) const;
  /// Sub-arc of J between trace positions i <= j.
  Arc subarc(const Arc& J, std::size_t i, std::size_t j) const;

  double base_dist(PointRef x, PointRef y) const;
  double dd(PointRef x, PointRef y) const;
  double arc_diam(const Arc& J) const;

  BranchData branch_data(PointRef p) const;
  const std::vector<PointRef>& branch_points() const { return branch_points_; }
  const std::vector<PointRef>& leaves() const { return leaves_; }

  /// Cut positions 0 = c_0 < c_1 < ... < c_n = |trace|-1 of n consecutive
  /// pieces with (nearly) equal diameter.
  std::vector<std::size_t> equal_diameter_cuts(const Arc& J, int n) const;
  std::vector<Arc> equal_diameter_split(const Arc& J, int n) const;

  DoublingEstimate estimate_doubling(const std::vector<double>& scales, double lambda) const;
  long long estimate_doubling_constant(const std::vector<double>& scales, double lambda) const {
    return estimate_doubling(scales, lambda).N;
  }

  /// Largest dd between grid neighbours.
  double grid_tolerance() const { return tolerance_; }
  /// All samples in depth-first edge order from node 0.
  const std::vector<PointRef>& dfs_order() const { return dfs_order_; }
  std::uint32_t dfs_rank(PointRef p) const { return dfs_rank_[p.id]; }
  /// Samples with dd(c, .) < r (or <= r when closed), sorted by id.
  std::vector<PointRef> ball(PointRef c, double r, bool closed = false) const;

  /// Hop count between two nodes of the combinatorial tree.
  int node_hops(std::uint32_t u, std::uint32_t v) const;

 private:
  struct Edge {
    std::uint32_t a, b;
    double len;  // normalized
    int g;
    std::uint32_t first_interior;
  };

  std::uint32_t lca(std::uint32_t u, std::uint32_t v) const;
  double node_geo(std::uint32_t u, std::uint32_t v) const;
  double geo_length(PointRef x, PointRef y) const;
  void embed(PointRef p, std::vector<double>& out) const;
  void build_table_matrix();
  void build_sides();
  double side_diam(std::uint32_t e, std::uint32_t toward, PointRef p) const;

  TreeSpec spec_;
  std::size_t node_count_ = 0;
  double scale_ = 1.0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> sample_edge_;
  std::vector<std::int32_t> sample_k_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> node_adj_;  // (edge, other)

  std::vector<std::uint32_t> parent_node_, parent_edge_;
  std::vector<int> depth_;
  std::vector<double> droot_;
  std::vector<std::vector<std::uint32_t>> up_;

  std::vector<std::vector<double>> table_;  // normalized
  std::vector<double> dd_matrix_;           // table mode only

  std::vector<PointRef> branch_points_, leaves_;
  std::vector<std::uint32_t> leaf_index_;
  std::vector<double> leaf_dd_;
  // Per directed edge 2e (side of a) and 2e+1 (side of b).
  std::vector<std::vector<std::uint32_t>> side_leaves_;
  std::vector<double> side_dm_;

  std::vector<PointRef> dfs_order_;
  std::vector<std::uint32_t> dfs_rank_;
  double tolerance_ = 0.0;
};

using TreePtr = std::shared_ptr<const MetricTree>;

}  // namespace treeunif
