#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treeunif/metric_tree.hpp"
#include "treeunif/rho_metric.hpp"

namespace treeunif {

struct QsReport {
  double H_empirical = 0.0;
  std::size_t samples = 0;
  PointRef wx, wy, wz;  // worst triple
  std::vector<std::pair<double, double>> quantiles;  // (q, ratio)
};

/// Sampled weak-quasisymmetry constant of the identity (T,dd) -> (T,rho).
/// Triple i draws y and z from dd-balls at scale delta^m, m = i mod (depth+1).
QsReport verify_weak_qs(const RhoMetric& rho, std::size_t samples, std::uint64_t seed);

/// Empirical doubling constant of (T, rho_{n_max}) over a point subsample.
/// Scales are fractions of the sampled rho-diameter.
DoublingEstimate verify_rho_doubling(const RhoMetric& rho, const std::vector<double>& scales, double lambda,
                                     std::size_t max_points = 200);

struct DimensionReport {
  double alpha = 0.0;
  int K = 0;
  Rational eps0;
  double L = 0.0;
  bool exact = false;  // integer alpha: per-tile sums compared as rationals
  bool per_tile_ok = true;
  std::size_t tiles_checked = 0;
  std::size_t tile_failures = 0;
  double worst_tile_ratio = 0.0;  // max of sum / (L w^alpha)
  std::vector<double> level_sums;       // S_n
  std::vector<double> level_ratios;     // S_n / S_{n-1}
  std::vector<double> diam_level_sums;  // 2^alpha S_n
  bool level_sums_ok = true;
  bool certified = false;               // L < 1 and all inequalities hold
  double dimension_bound = 0.0;         // smallest grid alpha with L < 1
};

double hausdorff_L(double alpha, int K, const Rational& eps0);
/// Smallest alpha = 1 + k/100 (k >= 1) with L(alpha) < 1.
double dimension_upper_bound(int K, const Rational& eps0);

DimensionReport hausdorff_bound(const TileDecomposition& decomp, const WeightAssignment& wa, double alpha);

}  // namespace treeunif
