#pragma once

#include <string>
#include <vector>

#include "treeunif/metric_tree.hpp"

namespace th {

using namespace treeunif;

inline TreeSpec segment(double length = 1.0, int resolution = 64) {
  TreeSpec t;
  t.nodes = {"a", "b"};
  t.edges = {{0, 1, length}};
  t.resolution = resolution;
  return t;
}

inline TreeSpec tripod(double leg = 1.0, int resolution = 64) {
  TreeSpec t;
  t.nodes = {"c", "x", "y", "z"};
  t.edges = {{0, 1, leg}, {0, 2, leg}, {0, 3, leg}};
  t.resolution = resolution;
  return t;
}

/// Complete binary tree of the given depth hanging below a root leaf edge,
/// so every internal node has degree 3.
inline TreeSpec binary(int depth, int resolution = 64) {
  TreeSpec t;
  t.resolution = resolution;
  t.nodes = {"top", "r"};
  t.edges = {{0, 1, 1.0}};
  std::vector<std::size_t> frontier{1};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier)
      for (int k = 0; k < 2; ++k) {
        std::size_t v = t.nodes.size();
        t.nodes.push_back("n" + std::to_string(v));
        t.edges.push_back({u, v, 1.0 / (1 << d)});
        next.push_back(v);
      }
    frontier = next;
  }
  return t;
}

inline TreeSpec table_path() {
  TreeSpec t;
  t.nodes = {"v0", "v1", "v2"};
  t.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  t.mode = MetricMode::Table;
  t.table = {{0, 1, 1.5}, {1, 0, 1}, {1.5, 1, 0}};
  t.resolution = 16;
  return t;
}

inline PointRef at(const MetricTree& T, std::uint32_t e, double t) { return T.point_at(e, t); }

}  // namespace th
