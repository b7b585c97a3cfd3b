#pragma once

#include <string>

#include "treeunif/subdivision.hpp"
#include "treeunif/weights.hpp"

namespace treeunif {

struct SvgStyle {
  int size = 800;         // square canvas, pixels
  int max_labels = 64;    // relative weights are printed when a level has at most this many arc-tiles
  double stroke = 3.0;
};

/// Planar drawing of the tree with the n-tiles as coloured strokes, the
/// n-vertices as dots and the main vertices of arc-tiles ringed. Edges are
/// laid out by a recursive angular embedding with lengths proportional to dd.
std::string render_svg(const TileDecomposition& decomp, const WeightAssignment& wa, int level,
                       const SvgStyle& style = {});

}  // namespace treeunif
