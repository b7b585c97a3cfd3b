#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "treeunif/check.hpp"
#include "treeunif/rational.hpp"
#include "treeunif/subdivision.hpp"
#include "treeunif/weights.hpp"

namespace treeunif {

struct RhoEstimate {
  Rational value;            // rho_{n_max}(x,y); 0 when x == y
  int level = 0;
  Rational upper_slack;      // rho(x,y) <= value + upper_slack
  Rational cauchy_residual;  // max |rho_n - rho_{n_max}| over the last four levels
  Rational finite_value;     // rho_{n_max}(x,y) as computed, also for x == y
};

struct MLevel {
  int level = 0;
  bool saturated = false;
};

struct GeodesicReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  Rational max_residual;
  double max_ratio = 0.0;  // residual / bound
  std::vector<std::string> witnesses;
  bool ok() const { return violations == 0; }
};

struct TileRhoDiam {
  Rational lower, upper, sampled, slack;
  bool ok = false;
};

struct SkeletonEdge {
  PointRef a, b;
  Rational length;
  bool exact = false;
  Rational slack;
  std::uint32_t tile = 0;
};

struct GeodesicSkeleton {
  std::vector<PointRef> vertices;
  std::vector<SkeletonEdge> edges;

  /// Path length and accumulated slack between two skeleton vertices.
  std::pair<Rational, Rational> path(PointRef u, PointRef v) const;
};

/// Portable uniform index in [0, n) drawn from a 64-bit engine.
std::size_t uniform_index(std::uint64_t bits, std::size_t n);

class RhoMetric {
 public:
  RhoMetric(DecompPtr decomp, WeightsPtr weights);

  const TileDecomposition& decomp() const { return *decomp_; }
  const WeightAssignment& weights() const { return *weights_; }
  int n_max() const { return decomp_->depth(); }

  Rational rho_n(PointRef x, PointRef y, int n) const;
  RhoEstimate rho(PointRef x, PointRef y) const;
  MLevel m_level(PointRef x, PointRef y) const;

  GeodesicReport geodesic_check(std::size_t samples, std::uint64_t seed) const;
  TileRhoDiam tile_rho_diam(std::uint32_t tile) const;
  GeodesicSkeleton build_geodesic_skeleton() const;

  /// rho_k(p,q) = w(X) for main pairs and eps0 w <= rho_k(u,v) <= w for
  /// other boundary pairs, for every built k >= level(X).
  CheckResult main_vertex_check() const;
  CheckResult boundary_pair_check() const;
  /// rho_k <= rho_n + 3^-n for n <= k on sampled pairs.
  CheckResult level_increment_check(std::size_t samples, std::uint64_t seed) const;
  /// Symmetry and the triangle inequality at every level on sampled triples.
  CheckResult basics_check(std::size_t samples, std::uint64_t seed) const;
  CheckResult tile_diam_check() const;

 private:
  DecompPtr decomp_;
  WeightsPtr weights_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, Rational> memo_;
};

}  // namespace treeunif
