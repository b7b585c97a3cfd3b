#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "treeunif/subdivision.hpp"

namespace oracle {

using treeunif::PointRef;
using treeunif::TileDecomposition;

struct ChainCensus {
  std::size_t simple_joining = 0;        // simple chains joining x and y in the strong sense
  bool simple_matches = false;           // the single one equals the library chain
  std::size_t joining = 0;               // all joining chains up to the length cap
  bool all_contain = true;               // each contains every tile of the library chain
};

/// Exhaustive enumeration of n-chains joining x and y. Simple chains are
/// enumerated without a length cap; general chains up to max_len tiles.
inline ChainCensus census(const TileDecomposition& D, PointRef x, PointRef y, int n, std::size_t max_len) {
  const auto tiles = D.level_tiles(n);
  const auto P = D.simple_chain(x, y, n).tiles;
  ChainCensus c;
  std::vector<std::uint32_t> cur;

  std::function<void()> simple = [&] {
    const std::uint32_t last = cur.back();
    if (D.tile_contains(last, y)) {
      c.simple_joining++;
      if (cur == P) c.simple_matches = true;
      return;
    }
    for (std::uint32_t t : tiles) {
      if (std::find(cur.begin(), cur.end(), t) != cur.end()) continue;
      if (!D.tiles_intersect(last, t)) continue;
      if (D.tile_contains(t, x)) continue;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < cur.size(); ++i)
        if (D.tiles_intersect(cur[i], t)) ok = false;
      if (!ok) continue;
      cur.push_back(t);
      simple();
      cur.pop_back();
    }
  };
  for (std::uint32_t t : tiles)
    if (D.tile_contains(t, x)) {
      if (D.tile_contains(t, y)) {
        // x and y share the first tile: only the one-tile chain is simple in the strong sense.
        cur = {t};
        c.simple_joining++;
        if (cur == P) c.simple_matches = true;
        continue;
      }
      cur = {t};
      simple();
    }

  std::function<void()> general = [&] {
    const std::uint32_t last = cur.back();
    if (D.tile_contains(last, y)) {
      c.joining++;
      for (std::uint32_t t : P)
        if (std::find(cur.begin(), cur.end(), t) == cur.end()) c.all_contain = false;
    }
    if (cur.size() >= max_len) return;
    for (std::uint32_t t : tiles) {
      if (t == last || !D.tiles_intersect(last, t)) continue;
      cur.push_back(t);
      general();
      cur.pop_back();
    }
  };
  for (std::uint32_t t : tiles)
    if (D.tile_contains(t, x)) {
      cur = {t};
      general();
    }
  return c;
}

}  // namespace oracle
