#include "treeunif/metric_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "treeunif/error.hpp"

namespace treeunif {

namespace {

constexpr std::size_t kTableSampleCap = 3000;

[[noreturn]] void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace

const char* to_string(MetricMode mode) noexcept {
  switch (mode) {
    case MetricMode::Geodesic: return "geodesic";
    case MetricMode::Snowflake: return "snowflake";
    case MetricMode::Table: return "table";
  }
  return "?";
}

const char* to_string(PointKind kind) noexcept {
  switch (kind) {
    case PointKind::Leaf: return "leaf";
    case PointKind::Double: return "double";
    case PointKind::Branch: return "branch";
  }
  return "?";
}

MetricTree::MetricTree(TreeSpec spec) : spec_(std::move(spec)) {
  const std::size_t V = spec_.nodes.size();
  node_count_ = V;
  if (V < 2 || spec_.edges.empty()) fail(Errc::InvalidInput, "tree needs at least one edge");
  if (spec_.edges.size() != V - 1) {
    if (spec_.edges.size() >= V) fail(Errc::CycleDetected, "cycle detected");
    fail(Errc::Disconnected, "disconnected graph");
  }
  if (spec_.resolution < 1) fail(Errc::InvalidInput, "resolution must be positive");
  if (spec_.mode == MetricMode::Snowflake && !(spec_.epsilon_s > 0.0 && spec_.epsilon_s <= 1.0))
    fail(Errc::EpsilonOutOfRange, "snowflake exponent must lie in (0,1]");

  // Union-find for cycle/connectivity detection.
  std::vector<std::size_t> uf(V);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& e : spec_.edges) {
    if (e.a >= V || e.b >= V) fail(Errc::InvalidInput, "edge references unknown node");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      fail(Errc::NonPositiveLength, "non-positive edge length");
    std::size_t ra = find(e.a), rb = find(e.b);
    if (ra == rb) fail(Errc::CycleDetected, "cycle detected");
    uf[ra] = rb;
  }

  node_adj_.assign(V, {});
  for (std::uint32_t e = 0; e < spec_.edges.size(); ++e) {
    node_adj_[spec_.edges[e].a].push_back({e, static_cast<std::uint32_t>(spec_.edges[e].b)});
    node_adj_[spec_.edges[e].b].push_back({e, static_cast<std::uint32_t>(spec_.edges[e].a)});
  }

  // Root the tree at node 0.
  parent_node_.assign(V, 0);
  parent_edge_.assign(V, UINT32_MAX);
  depth_.assign(V, 0);
  droot_.assign(V, 0.0);
  std::vector<double> raw_root(V, 0.0);
  std::vector<std::uint32_t> order{0};
  std::vector<char> seen(V, 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::uint32_t u = order[i];
    for (auto [e, v] : node_adj_[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      parent_node_[v] = u;
      parent_edge_[v] = e;
      depth_[v] = depth_[u] + 1;
      raw_root[v] = raw_root[u] + spec_.edges[e].length;
      order.push_back(v);
    }
  }

  // Normalization.
  if (spec_.mode == MetricMode::Table) {
    if (spec_.table.size() != V) fail(Errc::MissingTableEntry, "table must be nodes x nodes");
    double mx = 0.0;
    for (std::size_t i = 0; i < V; ++i) {
      if (spec_.table[i].size() != V) fail(Errc::MissingTableEntry, "table row has wrong length");
      for (std::size_t j = 0; j < V; ++j) {
        double v = spec_.table[i][j];
        if (!std::isfinite(v) || v < 0.0) fail(Errc::MissingTableEntry, "missing table entry");
        if (std::abs(v - spec_.table[j][i]) > 1e-12 * std::max(1.0, v))
          fail(Errc::InvalidInput, "table not symmetric");
        if ((i == j) != (v == 0.0)) fail(Errc::InvalidInput, "table must vanish exactly on the diagonal");
        mx = std::max(mx, v);
      }
    }
    for (std::size_t i = 0; i < V; ++i)
      for (std::size_t j = 0; j < V; ++j)
        for (std::size_t k = 0; k < V; ++k)
          if (spec_.table[i][j] > spec_.table[i][k] + spec_.table[k][j] + 1e-12 * mx)
            fail(Errc::InvalidInput, "table violates the triangle inequality");
    scale_ = 1.0 / mx;
    table_ = spec_.table;
    for (auto& row : table_)
      for (double& v : row) v *= scale_;
  } else {
    // Longest path by double sweep.
    auto farthest = [&](std::uint32_t s, std::vector<double>& dist) {
      dist.assign(V, -1.0);
      dist[s] = 0.0;
      std::vector<std::uint32_t> st{s};
      std::uint32_t best = s;
      while (!st.empty()) {
        std::uint32_t u = st.back();
        st.pop_back();
        if (dist[u] > dist[best]) best = u;
        for (auto [e, v] : node_adj_[u])
          if (dist[v] < 0.0) {
            dist[v] = dist[u] + spec_.edges[e].length;
            st.push_back(v);
          }
      }
      return best;
    };
    std::vector<double> dist;
    std::uint32_t far1 = farthest(0, dist);
    std::uint32_t far2 = farthest(far1, dist);
    scale_ = 1.0 / dist[far2];
  }
  const double len_scale = spec_.mode == MetricMode::Table ? 1.0 : scale_;
  for (std::size_t v = 0; v < V; ++v) droot_[v] = raw_root[v] * len_scale;

  // Sample grid.
  sample_edge_.assign(V, UINT32_MAX);
  sample_k_.assign(V, 0);
  double max_len = 0.0;
  for (std::uint32_t e = 0; e < spec_.edges.size(); ++e) {
    const auto& es = spec_.edges[e];
    Edge ed;
    ed.a = static_cast<std::uint32_t>(es.a);
    ed.b = static_cast<std::uint32_t>(es.b);
    ed.len = spec_.mode == MetricMode::Table ? table_[es.a][es.b] : es.length * scale_;
    ed.g = std::max(2, static_cast<int>(std::ceil(ed.len * spec_.resolution - 1e-9)));
    ed.first_interior = static_cast<std::uint32_t>(sample_edge_.size());
    for (int k = 1; k < ed.g; ++k) {
      sample_edge_.push_back(e);
      sample_k_.push_back(k);
    }
    edges_.push_back(ed);
    max_len = std::max(max_len, ed.len / ed.g);
  }
  const std::size_t S = sample_edge_.size();

  adj_.assign(S, {});
  for (std::uint32_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    std::uint32_t prev = ed.a;
    for (int k = 1; k <= ed.g; ++k) {
      std::uint32_t cur = edge_point(e, k).id;
      adj_[prev].push_back(cur);
      adj_[cur].push_back(prev);
      prev = cur;
    }
  }

  // Binary lifting.
  int LOG = 1;
  while ((1u << LOG) < V) ++LOG;
  up_.assign(LOG + 1, std::vector<std::uint32_t>(V));
  up_[0] = parent_node_;
  for (int j = 1; j <= LOG; ++j)
    for (std::size_t v = 0; v < V; ++v) up_[j][v] = up_[j - 1][up_[j - 1][v]];

  if (spec_.mode == MetricMode::Geodesic)
    tolerance_ = max_len;
  else if (spec_.mode == MetricMode::Snowflake)
    tolerance_ = std::pow(max_len, spec_.epsilon_s);
  else
    tolerance_ = max_len;  // adjacent samples differ by d(a,b)/g in the embedding

  if (spec_.mode == MetricMode::Table) {
    if (S > kTableSampleCap)
      fail(Errc::InvalidInput, "table mode supports at most " + std::to_string(kTableSampleCap) +
                                   " samples; lower the resolution");
    build_table_matrix();
  }

  for (std::uint32_t v = 0; v < V; ++v) {
    if (node_adj_[v].size() >= 3) branch_points_.push_back({v});
    if (node_adj_[v].size() == 1) leaves_.push_back({v});
  }
  build_sides();

  // Depth-first edge order.
  dfs_order_.reserve(S);
  std::vector<std::pair<std::uint32_t, std::size_t>> st{{0u, 0}};
  dfs_order_.push_back({0});
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> sorted_adj = node_adj_;
  for (auto& l : sorted_adj) std::sort(l.begin(), l.end());
  while (!st.empty()) {
    auto& [u, idx] = st.back();
    if (idx == sorted_adj[u].size()) {
      st.pop_back();
      continue;
    }
    auto [e, v] = sorted_adj[u][idx++];
    if (parent_edge_[u] == e) continue;
    const auto& ed = edges_[e];
    if (ed.a == u) {
      for (int k = 1; k < ed.g; ++k) dfs_order_.push_back(edge_point(e, k));
    } else {
      for (int k = ed.g - 1; k >= 1; --k) dfs_order_.push_back(edge_point(e, k));
    }
    dfs_order_.push_back({v});
    st.push_back({v, 0});
  }
  dfs_rank_.assign(S, 0);
  for (std::uint32_t i = 0; i < dfs_order_.size(); ++i) dfs_rank_[dfs_order_[i].id] = i;
}

PointRef MetricTree::edge_point(std::uint32_t e, int k) const {
  const auto& ed = edges_[e];
  if (k <= 0) return {ed.a};
  if (k >= ed.g) return {ed.b};
  return {ed.first_interior + static_cast<std::uint32_t>(k - 1)};
}

PointRef MetricTree::point_at(std::uint32_t e, double t) const {
  if (e >= edges_.size()) fail(Errc::PointNotOnGrid, "edge out of range");
  int k = static_cast<int>(std::lround(t * edges_[e].g));
  return edge_point(e, std::clamp(k, 0, edges_[e].g));
}

void MetricTree::check_point(PointRef p) const {
  if (p.id >= sample_edge_.size()) fail(Errc::PointNotOnGrid, "point not on tree grid");
}

std::string MetricTree::describe(PointRef p) const {
  if (is_node(p)) return "node " + spec_.nodes[p.id];
  std::ostringstream os;
  os << "edge " << edge_of(p) << " at " << k_of(p) << "/" << edges_[edge_of(p)].g;
  return os.str();
}

std::uint32_t MetricTree::lca(std::uint32_t u, std::uint32_t v) const {
  if (depth_[u] < depth_[v]) std::swap(u, v);
  int diff = depth_[u] - depth_[v];
  for (std::size_t j = 0; diff; ++j, diff >>= 1)
    if (diff & 1) u = up_[j][u];
  if (u == v) return u;
  for (std::size_t j = up_.size(); j-- > 0;)
    if (up_[j][u] != up_[j][v]) {
      u = up_[j][u];
      v = up_[j][v];
    }
  return parent_node_[u];
}

int MetricTree::node_hops(std::uint32_t u, std::uint32_t v) const {
  return depth_[u] + depth_[v] - 2 * depth_[lca(u, v)];
}

double MetricTree::node_geo(std::uint32_t u, std::uint32_t v) const {
  return droot_[u] + droot_[v] - 2.0 * droot_[lca(u, v)];
}

double MetricTree::geo_length(PointRef x, PointRef y) const {
  if (x == y) return 0.0;
  struct End {
    std::uint32_t node;
    double off;
  };
  auto ends = [&](PointRef p, End out[2]) {
    if (is_node(p)) {
      out[0] = {p.id, 0.0};
      return 1;
    }
    const auto& ed = edges_[sample_edge_[p.id]];
    double t = static_cast<double>(sample_k_[p.id]) / ed.g;
    out[0] = {ed.a, t * ed.len};
    out[1] = {ed.b, (1.0 - t) * ed.len};
    return 2;
  };
  if (!is_node(x) && !is_node(y) && sample_edge_[x.id] == sample_edge_[y.id]) {
    const auto& ed = edges_[sample_edge_[x.id]];
    return std::abs(sample_k_[x.id] - sample_k_[y.id]) * ed.len / ed.g;
  }
  End ex[2], ey[2];
  int nx = ends(x, ex), ny = ends(y, ey);
  double best = INFINITY;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      best = std::min(best, ex[i].off + node_geo(ex[i].node, ey[j].node) + ey[j].off);
  return best;
}

std::vector<EdgeSpan> MetricTree::spans_between(PointRef x, PointRef y) const {
  check_point(x);
  check_point(y);
  std::vector<EdgeSpan> out;
  if (x == y) return out;
  const bool xn = is_node(x), yn = is_node(y);
  if (!xn && !yn && sample_edge_[x.id] == sample_edge_[y.id]) {
    out.push_back({sample_edge_[x.id], sample_k_[x.id], sample_k_[y.id]});
    return out;
  }
  struct End {
    std::uint32_t node;
    int k;
  };
  auto ends = [&](PointRef p, End o[2]) {
    if (is_node(p)) {
      o[0] = {p.id, 0};
      return 1;
    }
    const auto& ed = edges_[sample_edge_[p.id]];
    o[0] = {ed.a, 0};
    o[1] = {ed.b, ed.g};
    return 2;
  };
  End ex[2], ey[2];
  int nx = ends(x, ex), ny = ends(y, ey);
  int bi = 0, bj = 0, best = INT32_MAX;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      int h = node_hops(ex[i].node, ey[j].node);
      if (h < best) {
        best = h;
        bi = i;
        bj = j;
      }
    }
  if (!xn) out.push_back({sample_edge_[x.id], sample_k_[x.id], ex[bi].k});
  std::uint32_t u = ex[bi].node, v = ey[bj].node, w = lca(u, v);
  for (std::uint32_t c = u; c != w; c = parent_node_[c]) {
    std::uint32_t e = parent_edge_[c];
    const auto& ed = edges_[e];
    out.push_back(ed.a == c ? EdgeSpan{e, 0, ed.g} : EdgeSpan{e, ed.g, 0});
  }
  std::vector<EdgeSpan> down;
  for (std::uint32_t c = v; c != w; c = parent_node_[c]) {
    std::uint32_t e = parent_edge_[c];
    const auto& ed = edges_[e];
    down.push_back(ed.b == c ? EdgeSpan{e, 0, ed.g} : EdgeSpan{e, ed.g, 0});
  }
  out.insert(out.end(), down.rbegin(), down.rend());
  if (!yn) out.push_back({sample_edge_[y.id], ey[bj].k, sample_k_[y.id]});
  return out;
}

Arc MetricTree::arc_between(PointRef x, PointRef y) const {
  Arc arc{x, y, {x}};
  for (const auto& s : spans_between(x, y)) {
    int step = s.to_k > s.from_k ? 1 : -1;
    for (int k = s.from_k + step; k != s.to_k + step; k += step) arc.trace.push_back(edge_point(s.edge, k));
  }
  return arc;
}

Arc MetricTree::subarc(const Arc& J, std::size_t i, std::size_t j) const {
  if (i > j || j >= J.trace.size()) fail(Errc::InvalidInput, "bad subarc bounds");
  Arc out{J.trace[i], J.trace[j], {}};
  out.trace.assign(J.trace.begin() + static_cast<std::ptrdiff_t>(i),
                   J.trace.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  return out;
}

void MetricTree::embed(PointRef p, std::vector<double>& out) const {
  if (is_node(p)) {
    out = table_[p.id];
    return;
  }
  const auto& ed = edges_[sample_edge_[p.id]];
  double t = static_cast<double>(sample_k_[p.id]) / ed.g;
  out.resize(node_count_);
  for (std::size_t i = 0; i < node_count_; ++i) out[i] = (1.0 - t) * table_[ed.a][i] + t * table_[ed.b][i];
}

double MetricTree::base_dist(PointRef x, PointRef y) const {
  check_point(x);
  check_point(y);
  if (x == y) return 0.0;
  switch (spec_.mode) {
    case MetricMode::Geodesic: return geo_length(x, y);
    case MetricMode::Snowflake: return std::pow(geo_length(x, y), spec_.epsilon_s);
    case MetricMode::Table: {
      std::vector<double> a, b;
      embed(x, a);
      embed(y, b);
      double m = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
      return m;
    }
  }
  return 0.0;
}

void MetricTree::build_table_matrix() {
  const std::size_t S = sample_count();
  std::vector<std::vector<double>> phi(S);
  for (std::uint32_t i = 0; i < S; ++i) embed({i}, phi[i]);
  // parent[x*S+y] = neighbour of y towards x; hop[x*S+y] = hop distance.
  std::vector<std::uint32_t> par(S * S);
  std::vector<std::uint32_t> hop(S * S);
  std::uint32_t max_hop = 0;
  std::vector<std::uint32_t> q;
  for (std::uint32_t x = 0; x < S; ++x) {
    q.assign(1, x);
    hop[x * S + x] = 0;
    par[x * S + x] = x;
    std::vector<char> vis(S, 0);
    vis[x] = 1;
    for (std::size_t i = 0; i < q.size(); ++i) {
      std::uint32_t u = q[i];
      for (std::uint32_t v : adj_[u])
        if (!vis[v]) {
          vis[v] = 1;
          par[x * S + v] = u;
          hop[x * S + v] = hop[x * S + u] + 1;
          max_hop = std::max(max_hop, hop[x * S + v]);
          q.push_back(v);
        }
    }
  }
  std::vector<std::size_t> count(max_hop + 2, 0);
  for (std::size_t i = 0; i < S * S; ++i) ++count[hop[i] + 1];
  for (std::size_t h = 1; h < count.size(); ++h) count[h] += count[h - 1];
  std::vector<std::uint32_t> order(S * S);
  for (std::size_t i = 0; i < S * S; ++i) order[count[hop[i]]++] = static_cast<std::uint32_t>(i);
  dd_matrix_.assign(S * S, 0.0);
  for (std::uint32_t idx : order) {
    std::uint32_t x = idx / S, y = idx % S;
    if (x == y) continue;
    double base = 0.0;
    for (std::size_t i = 0; i < node_count_; ++i) base = std::max(base, std::abs(phi[x][i] - phi[y][i]));
    std::uint32_t y1 = par[x * S + y];  // neighbour of y towards x
    std::uint32_t x1 = par[y * S + x];  // neighbour of x towards y
    dd_matrix_[idx] = std::max({base, dd_matrix_[x * S + y1], dd_matrix_[x1 * S + y]});
  }
}

double MetricTree::dd(PointRef x, PointRef y) const {
  check_point(x);
  check_point(y);
  if (x == y) return 0.0;
  switch (spec_.mode) {
    case MetricMode::Geodesic: return geo_length(x, y);
    case MetricMode::Snowflake: return std::pow(geo_length(x, y), spec_.epsilon_s);
    case MetricMode::Table: return dd_matrix_[static_cast<std::size_t>(x.id) * sample_count() + y.id];
  }
  return 0.0;
}

double MetricTree::arc_diam(const Arc& J) const {
  if (J.trace.size() <= 1) return 0.0;
  if (spec_.mode != MetricMode::Table) return dd(J.trace.front(), J.trace.back());
  double m = 0.0;
  for (std::size_t i = 0; i < J.trace.size(); ++i)
    for (std::size_t j = i + 1; j < J.trace.size(); ++j) m = std::max(m, base_dist(J.trace[i], J.trace[j]));
  return m;
}

void MetricTree::build_sides() {
  const std::size_t V = node_count_, L = leaves_.size();
  leaf_index_.assign(V, UINT32_MAX);
  for (std::uint32_t i = 0; i < L; ++i) leaf_index_[leaves_[i].id] = i;
  leaf_dd_.assign(L * L, 0.0);
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i + 1; j < L; ++j) leaf_dd_[i * L + j] = leaf_dd_[j * L + i] = dd(leaves_[i], leaves_[j]);

  // Leaves below each node in the rooted tree.
  std::vector<std::uint32_t> order{0};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto [e, v] : node_adj_[order[i]])
      if (parent_edge_[v] == e && v != 0) order.push_back(v);
  std::vector<std::vector<std::uint32_t>> below(V);
  for (std::size_t i = order.size(); i-- > 0;) {
    std::uint32_t u = order[i];
    if (leaf_index_[u] != UINT32_MAX) below[u].push_back(leaf_index_[u]);
    if (u != 0) {
      auto& pb = below[parent_node_[u]];
      pb.insert(pb.end(), below[u].begin(), below[u].end());
    }
  }
  const std::size_t E = edges_.size();
  side_leaves_.assign(2 * E, {});
  side_dm_.assign(2 * E, 0.0);
  for (std::uint32_t e = 0; e < E; ++e) {
    const auto& ed = edges_[e];
    std::uint32_t child = parent_node_[ed.a] == ed.b && parent_edge_[ed.a] == e ? ed.a : ed.b;
    std::vector<std::uint32_t> in = below[child];
    std::sort(in.begin(), in.end());
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < L; ++i)
      if (!std::binary_search(in.begin(), in.end(), i)) out.push_back(i);
    std::size_t child_slot = 2 * e + (child == ed.b ? 1 : 0);
    std::size_t other_slot = 2 * e + (child == ed.b ? 0 : 1);
    side_leaves_[child_slot] = std::move(in);
    side_leaves_[other_slot] = std::move(out);
  }
  for (std::size_t s = 0; s < 2 * E; ++s) {
    const auto& ls = side_leaves_[s];
    double m = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i)
      for (std::size_t j = i + 1; j < ls.size(); ++j) m = std::max(m, leaf_dd_[ls[i] * L + ls[j]]);
    side_dm_[s] = m;
  }
}

double MetricTree::side_diam(std::uint32_t e, std::uint32_t toward, PointRef p) const {
  std::size_t slot = 2 * e + (toward == edges_[e].b ? 1 : 0);
  double m = side_dm_[slot];
  for (std::uint32_t li : side_leaves_[slot]) m = std::max(m, dd(p, leaves_[li]));
  return m;
}

BranchData MetricTree::branch_data(PointRef p) const {
  check_point(p);
  BranchData bd;
  bd.at = p;
  if (is_node(p)) {
    for (auto [e, v] : node_adj_[p.id]) bd.branch_diams.push_back(side_diam(e, v, p));
  } else {
    std::uint32_t e = sample_edge_[p.id];
    bd.branch_diams.push_back(side_diam(e, edges_[e].a, p));
    bd.branch_diams.push_back(side_diam(e, edges_[e].b, p));
  }
  std::sort(bd.branch_diams.begin(), bd.branch_diams.end(), std::greater<>());
  bd.kind = bd.branch_diams.size() == 1 ? PointKind::Leaf
            : bd.branch_diams.size() == 2 ? PointKind::Double
                                          : PointKind::Branch;
  return bd;
}

std::vector<std::size_t> MetricTree::equal_diameter_cuts(const Arc& J, int n) const {
  if (n < 2) fail(Errc::InvalidInput, "split needs n >= 2");
  const auto& tr = J.trace;
  const std::size_t m = tr.size() - 1;
  if (tr.size() < 2 || m < static_cast<std::size_t>(n))
    fail(Errc::GridTooCoarse, "arc too short for the grid");

  auto greedy = [&](double delta, std::vector<std::size_t>& cuts) {
    cuts.assign(1, 0);
    std::size_t pos = 0;
    for (int i = 1; i < n; ++i) {
      std::size_t limit = m - static_cast<std::size_t>(n - i);
      std::size_t j = pos + 1;
      while (j + 1 <= limit && dd(tr[pos], tr[j + 1]) <= delta) ++j;
      cuts.push_back(j);
      pos = j;
    }
    cuts.push_back(m);
    return dd(tr[pos], tr[m]);
  };
  auto spread = [&](const std::vector<std::size_t>& cuts) {
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double d = dd(tr[cuts[i]], tr[cuts[i + 1]]);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    return hi - lo;
  };

  double lo = 0.0, hi = dd(tr.front(), tr.back());
  std::vector<std::size_t> cuts;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (greedy(mid, cuts) > mid)
      lo = mid;
    else
      hi = mid;
  }
  std::vector<std::size_t> a, b;
  greedy(lo, a);
  greedy(hi, b);
  return spread(a) <= spread(b) ? a : b;
}

std::vector<Arc> MetricTree::equal_diameter_split(const Arc& J, int n) const {
  auto cuts = equal_diameter_cuts(J, n);
  std::vector<Arc> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back(subarc(J, cuts[i], cuts[i + 1]));
  return out;
}

std::vector<PointRef> MetricTree::ball(PointRef c, double r, bool closed) const {
  check_point(c);
  auto inside = [&](PointRef y) {
    double d = dd(c, y);
    return closed ? d <= r : d < r;
  };
  std::vector<PointRef> out;
  if (!inside(c)) return out;
  std::vector<char> vis(sample_count(), 0);
  vis[c.id] = 1;
  out.push_back(c);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::uint32_t v : adj_[out[i].id])
      if (!vis[v]) {
        vis[v] = 1;
        if (inside({v})) out.push_back({v});
      }
  std::sort(out.begin(), out.end());
  return out;
}

DoublingEstimate MetricTree::estimate_doubling(const std::vector<double>& scales, double lambda) const {
  if (scales.empty()) fail(Errc::InvalidInput, "need at least one scale");
  if (!(lambda > 0.0 && lambda < 1.0)) fail(Errc::InvalidInput, "lambda must lie in (0,1)");
  const std::size_t S = sample_count();
  const std::size_t stride = std::max<std::size_t>(1, S / 512);
  DoublingEstimate est;
  for (std::size_t ci = 0; ci < S; ci += stride) {
    PointRef c = dfs_order_[ci];
    for (double s : scales) {
      auto pts = ball(c, s, true);
      std::sort(pts.begin(), pts.end(), [&](PointRef a, PointRef b) { return dfs_rank_[a.id] < dfs_rank_[b.id]; });
      std::vector<PointRef> chosen;
      for (PointRef p : pts) {
        bool ok = true;
        for (PointRef q : chosen)
          if (dd(p, q) < lambda * s) {
            ok = false;
            break;
          }
        if (ok) chosen.push_back(p);
      }
      est.packing = std::max(est.packing, static_cast<int>(chosen.size()));
    }
  }
  est.exponent = lambda <= 0.5 ? 1 : static_cast<int>(std::ceil(std::log(2.0) / std::log(1.0 / lambda) - 1e-12));
  est.N = 1;
  for (int i = 0; i < est.exponent; ++i) est.N *= est.packing;
  return est;
}

}  // namespace treeunif
