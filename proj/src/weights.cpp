#include "treeunif/weights.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "treeunif/error.hpp"

namespace treeunif {

Rational default_eps0(int K) {
  if (K < 1) throw Error(Errc::InvalidInput, "K must be >= 1");
  return Rational(1, 3 * K);
}

WeightAssignment assign_weights(const TileDecomposition& decomp, const Rational& eps0) {
  const int K = decomp.neighbor_stats().K;
  if (!(eps0 > 0) || eps0 > Rational(1, 3 * K))
    throw Error(Errc::Eps0OutOfRange, "eps0 = " + to_fraction_string(eps0) + " must lie in (0, 1/(3K)] with K = " +
                                          std::to_string(K));
  const std::size_t T = decomp.tile_count();
  WeightAssignment wa;
  wa.eps0 = eps0;
  wa.K = K;
  wa.weight.assign(T, Rational(0));
  wa.lambda.assign(T, Rational(0));
  wa.main.assign(T, std::nullopt);
  wa.main_chain_length.assign(T, 0);
  wa.weight[decomp.root()] = 1;
  wa.lambda[decomp.root()] = 1;
  std::vector<char> assigned(T, 0);
  assigned[decomp.root()] = 1;

  // Tile ids increase with level, so parents are done before children.
  for (std::uint32_t x = 0; x < T; ++x) {
    const Tile& X = decomp.tile(x);
    if (X.level >= decomp.depth()) continue;
    const Rational& w = wa.weight[x];
    std::vector<char> on_chain(T, 0);
    if (X.kind == TileKind::Arc) {
      const MainPair pq = *wa.main[x];
      Chain ch = decomp.simple_chain(pq.first, pq.second, X.level + 1);
      const std::size_t r = ch.size();
      wa.main_chain_length[x] = static_cast<int>(r);
      if (r < 3)
        throw Error(Errc::ChainTooShort, "main chain of tile " + std::to_string(x) + " has length " + std::to_string(r));
      std::vector<PointRef> pts{pq.first};
      pts.insert(pts.end(), ch.gateways.begin(), ch.gateways.end());
      pts.push_back(pq.second);
      const Rational inner(1, 3 * static_cast<long>(r - 2));
      for (std::size_t i = 0; i < r; ++i) {
        std::uint32_t c = ch.tiles[i];
        wa.lambda[c] = (i == 0 || i + 1 == r) ? Rational(1, 3) : inner;
        wa.main[c] = MainPair{pts[i], pts[i + 1]};
        on_chain[c] = 1;
      }
    }
    for (std::uint32_t c : X.children) {
      if (!on_chain[c]) {
        wa.lambda[c] = eps0;
        const Tile& C = decomp.tile(c);
        std::optional<PointRef> u;
        for (PointRef b : X.boundary)
          if (std::binary_search(C.boundary.begin(), C.boundary.end(), b)) {
            u = b;
            break;
          }
        if (C.kind == TileKind::Arc) {
          if (u)
            wa.main[c] = MainPair{*u, decomp.exit_vertex(*u, c)};
          else
            wa.main[c] = MainPair{C.boundary[0], C.boundary[1]};
        }
      }
      wa.weight[c] = wa.lambda[c] * w;
      assigned[c] = 1;
    }
  }
  for (std::uint32_t t = 0; t < T; ++t)
    if (!assigned[t]) throw Error(Errc::Internal, "tile " + std::to_string(t) + " received no weight");
  return wa;
}

Rational chain_length_w(const Chain& P, const WeightAssignment& wa, const TileDecomposition& decomp) {
  Rational s = 0;
  for (std::uint32_t t : P.tiles) {
    if (decomp.tile(t).level != P.level) throw Error(Errc::MixedLevels, "chain mixes tile levels");
    s += wa.weight.at(t);
  }
  return s;
}

const CheckResult& WeightReport::get(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no check named " + name);
}

WeightReport verify_weight_bounds(const TileDecomposition& decomp, const WeightAssignment& wa) {
  CheckResult root("root_weight"), sandwich("child_sandwich"), power("power_bound"), identity("main_chain_identity"),
      bchains("boundary_chains"), cchains("child_chains"), same("comparability_same_level"),
      adjacent("comparability_adjacent_level"), lvals("lambda_values"), desc("descendant_main");
  const Rational& e0 = wa.eps0;
  const std::size_t T = decomp.tile_count();
  const std::string tl = "tile ";

  root.expect(wa.weight[decomp.root()] == 1, "w(root) != 1");

  std::set<Rational> allowed{e0, Rational(1, 3)};
  for (int r = 3; r <= wa.K; ++r) allowed.insert(Rational(1, 3 * (r - 2)));

  for (std::uint32_t x = 0; x < T; ++x) {
    const Tile& X = decomp.tile(x);
    const Rational& w = wa.weight[x];
    power.expect(w <= inverse_power_of_three(X.level), tl + std::to_string(x) + " exceeds 3^-n");
    if (X.parent) lvals.expect(allowed.count(wa.lambda[x]) > 0, tl + std::to_string(x) + " has unexpected ratio");
    if (X.level >= decomp.depth()) continue;

    for (std::uint32_t c : X.children) {
      const Rational& wc = wa.weight[c];
      sandwich.expect(e0 * w <= wc && 3 * wc <= w, tl + std::to_string(c) + " outside [eps0 w, w/3]");
    }
    if (X.kind == TileKind::Arc) {
      const auto& pq = *wa.main[x];
      Chain ch = decomp.simple_chain(pq.first, pq.second, X.level + 1);
      identity.expect(chain_length_w(ch, wa, decomp) == w, tl + std::to_string(x) + " main chain length != w");
    }
    const auto& B = X.boundary;
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = i + 1; j < B.size(); ++j) {
        Rational len = chain_length_w(decomp.simple_chain(B[i], B[j], X.level + 1), wa, decomp);
        bool is_main = wa.main[x] && ((wa.main[x]->first == B[i] && wa.main[x]->second == B[j]) ||
                                      (wa.main[x]->first == B[j] && wa.main[x]->second == B[i]));
        bool ok = len >= e0 * w && (is_main ? len == w : len < w);
        bchains.expect(ok, tl + std::to_string(x) + " boundary chain length " + to_fraction_string(len / w) + " w");
      }

    // Simple chains of children: paths in the child adjacency tree.
    const auto& C = X.children;
    std::map<std::uint32_t, std::size_t> idx;
    for (std::size_t i = 0; i < C.size(); ++i) idx[C[i]] = i;
    std::vector<std::vector<std::size_t>> adj(C.size());
    for (std::size_t i = 0; i < C.size(); ++i)
      for (std::uint32_t nb : decomp.neighbors(C[i])) {
        auto it = idx.find(nb);
        if (it != idx.end()) adj[i].push_back(it->second);
      }
    for (std::size_t s = 0; s < C.size(); ++s) {
      std::vector<Rational> len(C.size(), Rational(-1));
      len[s] = wa.weight[C[s]];
      std::queue<std::size_t> q;
      q.push(s);
      while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        for (std::size_t v : adj[u])
          if (len[v] < 0) {
            len[v] = len[u] + wa.weight[C[v]];
            q.push(v);
          }
      }
      for (std::size_t t = s; t < C.size(); ++t)
        cchains.expect(len[t] >= e0 * w && 3 * len[t] <= 4 * w,
                       tl + std::to_string(x) + " child chain length outside [eps0 w, 4w/3]");
    }
  }

  // Comparability of touching tiles.
  const Rational c2 = (3 * e0) * (3 * e0);
  for (std::uint32_t x = 0; x < T; ++x) {
    const Tile& X = decomp.tile(x);
    if (X.level == 0) continue;
    for (std::uint32_t y : decomp.neighbors(x)) {
      if (y < x) continue;
      Rational ratio = wa.weight[x] / wa.weight[y];
      same.expect(ratio >= c2 && ratio * c2 <= 1, tl + std::to_string(x) + "/" + std::to_string(y) + " ratio");
    }
    if (X.level >= decomp.depth()) continue;
    std::vector<std::uint32_t> touching = X.children;
    for (PointRef v : X.boundary) {
      auto pr = decomp.vertex_tiles(v, X.level);
      std::uint32_t other = pr.first == x ? pr.second : pr.first;
      touching.push_back(decomp.child_containing(other, v));
    }
    for (std::uint32_t y : touching) {
      Rational ratio = wa.weight[x] / wa.weight[y];
      adjacent.expect(ratio >= 3 * c2 && ratio * e0 * c2 <= 1,
                      tl + std::to_string(x) + "/" + std::to_string(y) + " cross-level ratio");
    }
  }

  // A boundary vertex of X stays a main vertex of the tiles below it, each a third of the previous.
  for (std::uint32_t x = 0; x < T; ++x) {
    const Tile& X = decomp.tile(x);
    if (X.level == 0 || X.level + 1 >= decomp.depth()) continue;
    for (PointRef u : X.boundary) {
      std::uint32_t xp = decomp.child_containing(x, u);
      std::uint32_t y = xp;
      bool ok = wa.main[xp] && (wa.main[xp]->first == u || wa.main[xp]->second == u);
      for (int k = X.level + 2; k <= decomp.depth() && ok; ++k) {
        y = decomp.child_containing(y, u);
        ok = wa.weight[y] == wa.weight[xp] * inverse_power_of_three(k - X.level - 1) && wa.main[y] &&
             (wa.main[y]->first == u || wa.main[y]->second == u);
      }
      desc.expect(ok, tl + std::to_string(x) + " descendant weights of a boundary vertex");
    }
  }

  return WeightReport{{root, sandwich, power, identity, bchains, cchains, same, adjacent, lvals, desc}};
}

}  // namespace treeunif
