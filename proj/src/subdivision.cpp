#include "treeunif/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treeunif/error.hpp"

namespace treeunif {

const char* to_string(TileKind kind) noexcept {
  switch (kind) {
    case TileKind::Root: return "root";
    case TileKind::Arc: return "arc";
    case TileKind::Leaf: return "leaf";
  }
  return "?";
}

TileDecomposition::TileDecomposition(TreePtr tree, const HierarchyParams& params)
    : tree_(std::move(tree)), params_(params) {}

std::shared_ptr<const TileDecomposition> TileDecomposition::build(TreePtr tree, const HierarchyParams& params) {
  if (params.depth < 1) throw Error(Errc::InvalidInput, "depth must be >= 1");
  if (!(params.delta > 0.0 && params.delta < 1.0 / (3.0 * params.beta)))
    throw Error(Errc::InvalidInput, "delta must lie in (0, 1/(3 beta))");
  std::vector<std::vector<PointRef>> levels;
  std::vector<PointRef> V;
  for (int n = 1; n <= params.depth; ++n) {
    GoodPointParams gp{params.beta, params.gamma, std::pow(params.delta, n)};
    try {
      V = maximal_good_set(*tree, gp, V);
    } catch (const Error& e) {
      throw Error(e.code(), "level " + std::to_string(n) + ": " + e.what());
    }
    levels.push_back(V);
  }
  return from_vertex_sets(std::move(tree), params, std::move(levels));
}

std::shared_ptr<const TileDecomposition> TileDecomposition::from_vertex_sets(
    TreePtr tree, const HierarchyParams& params, std::vector<std::vector<PointRef>> levels) {
  if (static_cast<int>(levels.size()) != params.depth)
    throw Error(Errc::InvalidInput, "number of vertex levels does not match depth");
  std::shared_ptr<TileDecomposition> d(new TileDecomposition(std::move(tree), params));
  d->add_level({});
  for (std::size_t n = 0; n < levels.size(); ++n) {
    auto& V = levels[n];
    std::sort(V.begin(), V.end());
    V.erase(std::unique(V.begin(), V.end()), V.end());
    if (n > 0)
      for (PointRef v : levels[n - 1])
        if (!std::binary_search(V.begin(), V.end(), v))
          throw Error(Errc::InvalidInput, "vertex sets are not nested");
    d->add_level(V);
  }
  return d;
}

void TileDecomposition::add_level(std::vector<PointRef> V) {
  const MetricTree& T = *tree_;
  const int n = static_cast<int>(levels_.size());
  const std::size_t E = T.edge_count();
  Level L;
  L.vertices = std::move(V);
  L.is_vertex.assign(T.sample_count(), 0);
  L.cuts.assign(E, {});
  for (PointRef v : L.vertices) {
    T.check_point(v);
    if (T.degree(v) != 2) throw Error(Errc::InvalidInput, "vertex " + T.describe(v) + " is not a double point");
    L.is_vertex[v.id] = 1;
    if (!T.is_node(v)) L.cuts[T.edge_of(v)].push_back(T.k_of(v));
  }
  L.piece_base.assign(E + 1, 0);
  for (std::uint32_t e = 0; e < E; ++e) {
    std::sort(L.cuts[e].begin(), L.cuts[e].end());
    L.piece_base[e + 1] = L.piece_base[e] + static_cast<std::uint32_t>(L.cuts[e].size() + 1);
  }
  const std::uint32_t P = L.piece_base[E];
  std::vector<std::uint32_t> uf(P);
  std::iota(uf.begin(), uf.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<std::vector<std::uint32_t>> node_pieces(T.node_count());
  for (std::uint32_t e = 0; e < E; ++e) {
    node_pieces[T.edge_a(e)].push_back(L.piece_base[e]);
    node_pieces[T.edge_b(e)].push_back(L.piece_base[e + 1] - 1);
  }
  for (std::uint32_t u = 0; u < T.node_count(); ++u) {
    if (L.is_vertex[u]) continue;
    for (std::size_t i = 1; i < node_pieces[u].size(); ++i) uf[find(node_pieces[u][i])] = find(node_pieces[u][0]);
  }

  L.first_tile = static_cast<std::uint32_t>(tiles_.size());
  std::vector<std::uint32_t> root_tile(P, UINT32_MAX);
  L.piece_tile.assign(P, 0);
  for (std::uint32_t e = 0; e < E; ++e) {
    const auto& cuts = L.cuts[e];
    const int g = T.grid_size(e);
    for (std::uint32_t p = 0; p <= cuts.size(); ++p) {
      std::uint32_t gp = L.piece_base[e] + p;
      std::uint32_t r = find(gp);
      if (root_tile[r] == UINT32_MAX) {
        root_tile[r] = static_cast<std::uint32_t>(tiles_.size());
        Tile t;
        t.id = root_tile[r];
        t.level = n;
        tiles_.push_back(t);
      }
      std::uint32_t tid = root_tile[r];
      L.piece_tile[gp] = tid;
      Segment s{e, p == 0 ? 0 : cuts[p - 1], p == cuts.size() ? g : cuts[p]};
      Tile& t = tiles_[tid];
      t.segments.push_back(s);
      for (PointRef end : {T.edge_point(e, s.from_k), T.edge_point(e, s.to_k)}) {
        if (!L.is_vertex[end.id]) continue;
        t.boundary.push_back(end);
        auto it = L.vtiles.find(end.id);
        if (it == L.vtiles.end())
          L.vtiles[end.id] = {tid, UINT32_MAX};
        else if (it->second.first != tid)
          it->second.second = tid;
      }
    }
  }
  L.tile_count = static_cast<std::uint32_t>(tiles_.size()) - L.first_tile;
  for (auto& [v, pr] : L.vtiles) {
    if (pr.second == UINT32_MAX) throw Error(Errc::Internal, "vertex lies in a single tile");
    if (pr.first > pr.second) std::swap(pr.first, pr.second);
  }
  levels_.push_back(std::move(L));

  const Level& cur = levels_.back();
  for (std::uint32_t tid = cur.first_tile; tid < cur.first_tile + cur.tile_count; ++tid) {
    Tile& t = tiles_[tid];
    std::sort(t.boundary.begin(), t.boundary.end());
    t.boundary.erase(std::unique(t.boundary.begin(), t.boundary.end()), t.boundary.end());
    if (n == 0)
      t.kind = TileKind::Root;
    else if (t.boundary.size() >= 2)
      t.kind = TileKind::Arc;
    else if (t.boundary.size() == 1)
      t.kind = TileKind::Leaf;
    else
      throw Error(Errc::InvalidInput, "level " + std::to_string(n) + " has no vertices");
    if (n > 0) {
      std::uint32_t par = segment_tile(n - 1, t.segments[0].edge, t.segments[0].from_k);
      t.parent = par;
      tiles_[par].children.push_back(tid);
    }
    double d = 0.0;
    auto ext = extremal_points(tid);
    for (std::size_t i = 0; i < ext.size(); ++i)
      for (std::size_t j = i + 1; j < ext.size(); ++j) d = std::max(d, T.dd(ext[i], ext[j]));
    t.diam = d;
  }
}

void TileDecomposition::check_level(int n) const {
  if (n < 0 || n > depth()) throw Error(Errc::LevelOutOfRange, "level " + std::to_string(n) + " not built");
}

const std::vector<PointRef>& TileDecomposition::vertices(int n) const {
  check_level(n);
  return levels_[n].vertices;
}

bool TileDecomposition::is_vertex(PointRef p, int n) const {
  check_level(n);
  return levels_[n].is_vertex[p.id] != 0;
}

std::vector<std::uint32_t> TileDecomposition::level_tiles(int n) const {
  check_level(n);
  std::vector<std::uint32_t> out(levels_[n].tile_count);
  std::iota(out.begin(), out.end(), levels_[n].first_tile);
  return out;
}

std::uint32_t TileDecomposition::piece_index(const Level& L, std::uint32_t e, std::int32_t seg) const {
  const auto& c = L.cuts[e];
  return static_cast<std::uint32_t>(std::upper_bound(c.begin(), c.end(), seg) - c.begin());
}

std::uint32_t TileDecomposition::segment_tile(int n, std::uint32_t e, std::int32_t seg) const {
  const Level& L = levels_[n];
  return L.piece_tile[L.piece_base[e] + piece_index(L, e, seg)];
}

std::vector<std::uint32_t> TileDecomposition::tiles_containing(PointRef x, int n) const {
  check_level(n);
  tree_->check_point(x);
  const Level& L = levels_[n];
  if (L.is_vertex[x.id]) {
    auto pr = L.vtiles.at(x.id);
    return {pr.first, pr.second};
  }
  const MetricTree& T = *tree_;
  if (T.is_node(x)) {
    PointRef q{T.neighbors(x)[0]};
    std::uint32_t e = T.edge_of(q);
    return {segment_tile(n, e, T.edge_a(e) == x.id ? 0 : T.grid_size(e) - 1)};
  }
  return {segment_tile(n, T.edge_of(x), T.k_of(x))};
}

bool TileDecomposition::tile_contains(std::uint32_t t, PointRef x) const {
  auto c = tiles_containing(x, tile(t).level);
  return std::find(c.begin(), c.end(), t) != c.end();
}

std::uint32_t TileDecomposition::child_containing(std::uint32_t X, PointRef p) const {
  const int n = tile(X).level;
  check_level(n + 1);
  for (std::uint32_t c : tiles_containing(p, n + 1))
    if (tiles_[c].parent == X) return c;
  throw Error(Errc::InvalidInput, "point " + tree_->describe(p) + " is not in tile " + std::to_string(X));
}

std::uint32_t TileDecomposition::ancestor(std::uint32_t t, int level) const {
  if (level > tile(t).level || level < 0) throw Error(Errc::LevelOutOfRange, "ancestor level out of range");
  while (tiles_[t].level > level) t = *tiles_[t].parent;
  return t;
}

bool TileDecomposition::tiles_intersect(std::uint32_t a, std::uint32_t b) const {
  if (tile(a).level > tile(b).level) std::swap(a, b);
  const Tile& A = tile(a);
  std::uint32_t anc = ancestor(b, A.level);
  if (anc == a) return true;
  const Tile& B = tile(b);
  for (PointRef v : A.boundary)
    if (std::binary_search(tiles_[anc].boundary.begin(), tiles_[anc].boundary.end(), v) &&
        std::binary_search(B.boundary.begin(), B.boundary.end(), v))
      return true;
  return false;
}

std::pair<std::uint32_t, std::uint32_t> TileDecomposition::vertex_tiles(PointRef v, int n) const {
  check_level(n);
  auto it = levels_[n].vtiles.find(v.id);
  if (it == levels_[n].vtiles.end()) throw Error(Errc::InvalidInput, "not a vertex at this level");
  return it->second;
}

std::vector<std::uint32_t> TileDecomposition::neighbors(std::uint32_t t) const {
  std::vector<std::uint32_t> out;
  const Tile& X = tile(t);
  for (PointRef v : X.boundary) {
    auto pr = vertex_tiles(v, X.level);
    out.push_back(pr.first == t ? pr.second : pr.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Chain TileDecomposition::simple_chain(PointRef x, PointRef y, int n) const {
  check_level(n);
  const MetricTree& T = *tree_;
  Chain ch;
  ch.level = n;
  ch.x = x;
  ch.y = y;
  if (x == y) {
    auto c = tiles_containing(x, n);
    ch.tiles = {*std::min_element(c.begin(), c.end())};
    ch.degenerate = true;
    return ch;
  }
  const Level& L = levels_[n];
  auto visit = [&](std::uint32_t tid, PointRef entry) {
    if (!ch.tiles.empty() && ch.tiles.back() == tid) return;
    if (!ch.tiles.empty()) {
      if (!L.is_vertex[entry.id]) throw Error(Errc::Internal, "chain changes tile away from a vertex");
      ch.gateways.push_back(entry);
    }
    ch.tiles.push_back(tid);
  };
  for (const auto& s : T.spans_between(x, y)) {
    const auto& cuts = L.cuts[s.edge];
    const std::uint32_t base = L.piece_base[s.edge];
    if (s.to_k > s.from_k) {
      std::uint32_t p0 = piece_index(L, s.edge, s.from_k), p1 = piece_index(L, s.edge, s.to_k - 1);
      for (std::uint32_t p = p0; p <= p1; ++p)
        visit(L.piece_tile[base + p], T.edge_point(s.edge, p == p0 ? s.from_k : cuts[p - 1]));
    } else {
      std::uint32_t p0 = piece_index(L, s.edge, s.from_k - 1), p1 = piece_index(L, s.edge, s.to_k);
      for (std::uint32_t p = p0 + 1; p-- > p1;)
        visit(L.piece_tile[base + p], T.edge_point(s.edge, p == p0 ? s.from_k : cuts[p]));
    }
  }
  std::vector<std::uint32_t> sorted = ch.tiles;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(Errc::Internal, "chain revisits a tile");
  return ch;
}

Chain TileDecomposition::refine_chain(const Chain& P) const {
  const int n = P.level;
  if (n + 1 > depth()) throw Error(Errc::LevelOutOfRange, "level " + std::to_string(n + 1) + " not built");
  Chain direct = simple_chain(P.x, P.y, n + 1);
  if (P.degenerate) return direct;
  std::vector<PointRef> pts{P.x};
  pts.insert(pts.end(), P.gateways.begin(), P.gateways.end());
  pts.push_back(P.y);
  Chain out;
  out.level = n + 1;
  out.x = P.x;
  out.y = P.y;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i] == pts[i + 1]) continue;
    Chain sub = simple_chain(pts[i], pts[i + 1], n + 1);
    for (std::uint32_t t : sub.tiles)
      if (tiles_[t].parent != P.tiles[i]) throw Error(Errc::Internal, "refined sub-chain leaves its parent tile");
    if (!out.tiles.empty()) out.gateways.push_back(pts[i]);
    out.tiles.insert(out.tiles.end(), sub.tiles.begin(), sub.tiles.end());
    out.gateways.insert(out.gateways.end(), sub.gateways.begin(), sub.gateways.end());
  }
  if (!(out == direct)) throw Error(Errc::Internal, "refined chain differs from the direct simple chain");
  return out;
}

PointRef TileDecomposition::exit_vertex(PointRef u, std::uint32_t child) const {
  const Tile& Xp = tile(child);
  if (!Xp.parent) throw Error(Errc::InvalidInput, "root has no parent tile");
  const Tile& X = tile(*Xp.parent);
  if (!std::binary_search(X.boundary.begin(), X.boundary.end(), u))
    throw Error(Errc::InvalidInput, "u is not a boundary vertex of the parent tile");
  if (!std::binary_search(Xp.boundary.begin(), Xp.boundary.end(), u))
    throw Error(Errc::InvalidInput, "u is not in the child tile");
  if (X.boundary.size() == 1) {
    for (PointRef w : Xp.boundary)
      if (w != u) return w;
    throw Error(Errc::ChainTooShort, "child tile has no second vertex");
  }
  std::optional<PointRef> exit;
  for (PointRef v : X.boundary) {
    if (v == u) continue;
    Chain ch = simple_chain(u, v, Xp.level);
    if (ch.tiles.front() != child) throw Error(Errc::Internal, "chain from u does not start in its child tile");
    PointRef e = ch.gateways.empty() ? v : ch.gateways.front();
    if (exit && *exit != e)
      throw Error(Errc::IndependenceViolated, "exit vertex of " + tree_->describe(u) + " in tile " +
                                                  std::to_string(child) + " depends on the target vertex");
    exit = e;
  }
  return *exit;
}

std::vector<PointRef> TileDecomposition::extremal_points(std::uint32_t t) const {
  const Tile& X = tile(t);
  std::vector<PointRef> out = X.boundary;
  for (PointRef leaf : tree_->leaves())
    if (tiles_containing(leaf, X.level).front() == t) out.push_back(leaf);
  return out;
}

std::vector<PointRef> TileDecomposition::segment_midpoints(std::uint32_t t) const {
  const Tile& X = tile(t);
  const Level& L = levels_[X.level];
  std::vector<PointRef> out;
  for (const auto& s : X.segments) {
    PointRef m = tree_->edge_point(s.edge, (s.from_k + s.to_k) / 2);
    if (L.is_vertex[m.id]) m = tree_->edge_point(s.edge, s.to_k);
    if (!L.is_vertex[m.id]) out.push_back(m);
  }
  return out;
}

double TileDecomposition::tile_distance(std::uint32_t a, std::uint32_t b) const {
  const Tile &A = tile(a), &B = tile(b);
  double d = INFINITY;
  for (PointRef u : A.boundary)
    for (PointRef v : B.boundary) d = std::min(d, tree_->dd(u, v));
  return d;
}

DeltaReport TileDecomposition::validate_delta() const {
  DeltaReport r;
  constexpr std::size_t kCap = 8;
  std::map<char, std::size_t> nfail;
  auto failure = [&](char c, std::uint32_t t, std::string msg) {
    if (c == 'a') r.a = false;
    if (c == 'b') r.b = false;
    if (c == 'c') r.c = false;
    if (c == 'd') r.d = false;
    if (nfail[c]++ < kCap) r.failures.push_back({c, t, std::move(msg)});
  };
  for (int n = 0; n < depth(); ++n) {
    for (std::uint32_t t : level_tiles(n)) {
      const Tile& X = tiles_[t];
      ++r.checked_a;
      if (X.children.size() < 3)
        failure('a', t, "tile " + std::to_string(t) + " (level " + std::to_string(n) + ") has " +
                            std::to_string(X.children.size()) + " children");
      if (n == 0) continue;
      const auto& B = X.boundary;
      for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = i + 1; j < B.size(); ++j) {
          Chain ch = simple_chain(B[i], B[j], n + 1);
          ++r.checked_b;
          if (ch.size() < 3)
            failure('b', t, "chain between " + tree_->describe(B[i]) + " and " + tree_->describe(B[j]) +
                                " has length " + std::to_string(ch.size()));
          ++r.checked_d;
          for (std::uint32_t c : ch.tiles)
            for (PointRef w : B)
              if (w != B[i] && w != B[j] && tile_contains(c, w)) {
                failure('d', t, "chain between boundary vertices meets " + tree_->describe(w));
                break;
              }
        }
      for (PointRef u : B) {
        ++r.checked_c;
        try {
          exit_vertex(u, child_containing(t, u));
        } catch (const Error& e) {
          failure('c', t, e.what());
        }
      }
    }
  }
  return r;
}

CheckResult TileDecomposition::tile_diameter_check() const {
  CheckResult c("tile_diameter");
  const double tol = tree_->grid_tolerance();
  for (int n = 1; n <= depth(); ++n) {
    const double s = std::pow(params_.delta, n);
    for (std::uint32_t t : level_tiles(n)) {
      const double d = tiles_[t].diam;
      c.expect(s - tol <= d && d <= 3 * params_.beta * s + tol,
               "tile " + std::to_string(t) + " level " + std::to_string(n) + " diam " + std::to_string(d));
    }
  }
  return c;
}

CheckResult TileDecomposition::tile_separation_check() const {
  CheckResult c("tile_separation");
  const double tol = tree_->grid_tolerance();
  for (int n = 1; n <= depth(); ++n) {
    const double s = std::pow(params_.delta, n);
    auto ids = level_tiles(n);
    std::vector<PointRef> anchor;
    for (std::uint32_t t : ids) anchor.push_back(extremal_points(t).front());
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const Tile &X = tiles_[ids[i]], &Y = tiles_[ids[j]];
        if (tree_->dd(anchor[i], anchor[j]) - X.diam - Y.diam >= s) {
          c.pass();
          continue;
        }
        if (tiles_intersect(X.id, Y.id)) continue;
        const double d = tile_distance(X.id, Y.id);
        c.expect(d >= s - tol, "tiles " + std::to_string(X.id) + " and " + std::to_string(Y.id) + " at distance " +
                                   std::to_string(d));
      }
  }
  return c;
}

NeighborStats TileDecomposition::neighbor_stats() const {
  NeighborStats s;
  for (int n = 0; n <= depth(); ++n) {
    std::map<int, int> nh, ch;
    for (std::uint32_t t : level_tiles(n)) {
      const Tile& X = tiles_[t];
      int nb = 1 + static_cast<int>(X.boundary.size());
      int kids = static_cast<int>(X.children.size());
      ++nh[nb];
      if (n < depth()) ++ch[kids];
      s.K = std::max({s.K, nb, kids});
    }
    s.neighbor_hist.push_back(std::move(nh));
    s.children_hist.push_back(std::move(ch));
  }
  return s;
}

}  // namespace treeunif
