#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "treeunif/check.hpp"
#include "treeunif/rational.hpp"
#include "treeunif/subdivision.hpp"

namespace treeunif {

using MainPair = std::pair<PointRef, PointRef>;

struct WeightAssignment {
  Rational eps0;
  int K = 0;
  std::vector<Rational> weight;                 // by tile id
  std::vector<Rational> lambda;                 // w(X')/w(parent); 1 for the root
  std::vector<std::optional<MainPair>> main;    // arc-tiles only
  std::vector<int> main_chain_length;           // r of the tile's main child chain, 0 if none

  const Rational& w(std::uint32_t tile) const { return weight.at(tile); }
};

using WeightsPtr = std::shared_ptr<const WeightAssignment>;

/// Default eps0 = 1/(3K).
Rational default_eps0(int K);

WeightAssignment assign_weights(const TileDecomposition& decomp, const Rational& eps0);

Rational chain_length_w(const Chain& P, const WeightAssignment& wa, const TileDecomposition& decomp);

struct WeightReport {
  std::vector<CheckResult> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
  const CheckResult& get(const std::string& name) const;
};

WeightReport verify_weight_bounds(const TileDecomposition& decomp, const WeightAssignment& wa);

}  // namespace treeunif
