#include "treeunif/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "treeunif/error.hpp"

namespace treeunif {

QsReport verify_weak_qs(const RhoMetric& rho, std::size_t samples, std::uint64_t seed) {
  const TileDecomposition& D = rho.decomp();
  const MetricTree& T = D.tree();
  const int N = rho.n_max();
  std::mt19937_64 rng(seed);
  const std::size_t S = T.sample_count();
  QsReport rep;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < samples; ++i) {
    const int m = static_cast<int>(i % static_cast<std::size_t>(N + 1));
    PointRef x{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    auto ball = T.ball(x, std::pow(D.params().delta, m), true);
    PointRef y = ball[uniform_index(rng(), ball.size())];
    PointRef z = ball[uniform_index(rng(), ball.size())];
    if (i % 7 == 0) y = z;
    if (T.dd(x, y) > T.dd(x, z)) std::swap(y, z);
    if (z == x) continue;
    double r = to_double(rho.rho(x, y).value) / to_double(rho.rho(x, z).value);
    ratios.push_back(r);
    if (r > rep.H_empirical || rep.samples == 0) {
      rep.H_empirical = std::max(rep.H_empirical, r);
      rep.wx = x;
      rep.wy = y;
      rep.wz = z;
    }
    ++rep.samples;
  }
  std::sort(ratios.begin(), ratios.end());
  for (double q : {0.5, 0.9, 0.99, 1.0}) {
    if (ratios.empty()) break;
    std::size_t k = std::min(ratios.size() - 1, static_cast<std::size_t>(q * static_cast<double>(ratios.size() - 1)));
    rep.quantiles.push_back({q, ratios[k]});
  }
  return rep;
}

DoublingEstimate verify_rho_doubling(const RhoMetric& rho, const std::vector<double>& scales, double lambda,
                                     std::size_t max_points) {
  if (scales.empty() || !(lambda > 0.0 && lambda < 1.0))
    throw Error(Errc::InvalidInput, "need scales and lambda in (0,1)");
  const MetricTree& T = rho.decomp().tree();
  const auto& order = T.dfs_order();
  const std::size_t stride = std::max<std::size_t>(1, (order.size() + max_points - 1) / max_points);
  std::vector<PointRef> pts;
  for (std::size_t i = 0; i < order.size(); i += stride) pts.push_back(order[i]);
  const std::size_t P = pts.size();
  std::vector<double> d(P * P, 0.0);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = i + 1; j < P; ++j) d[i * P + j] = d[j * P + i] = to_double(rho.rho(pts[i], pts[j]).value);
  const double diam = *std::max_element(d.begin(), d.end());
  DoublingEstimate est;
  for (std::size_t c = 0; c < P; ++c)
    for (double rel : scales) {
      const double s = rel * diam;
      std::vector<std::size_t> chosen;
      for (std::size_t p = 0; p < P; ++p) {
        if (d[c * P + p] > s) continue;
        bool ok = true;
        for (std::size_t q : chosen)
          if (d[p * P + q] < lambda * s) {
            ok = false;
            break;
          }
        if (ok) chosen.push_back(p);
      }
      est.packing = std::max(est.packing, static_cast<int>(chosen.size()));
    }
  est.exponent = lambda <= 0.5 ? 1 : static_cast<int>(std::ceil(std::log(2.0) / std::log(1.0 / lambda) - 1e-12));
  est.N = 1;
  for (int i = 0; i < est.exponent; ++i) est.N *= est.packing;
  return est;
}

double hausdorff_L(double alpha, int K, const Rational& eps0) {
  long double e = static_cast<long double>(to_double(eps0));
  return static_cast<double>(std::pow(1.0L / 3.0L, static_cast<long double>(alpha) - 1.0L) +
                             static_cast<long double>(K) * std::pow(e, static_cast<long double>(alpha)));
}

double dimension_upper_bound(int K, const Rational& eps0) {
  for (int k = 1; k <= 100000; ++k) {
    double alpha = (100.0 + k) / 100.0;
    if (hausdorff_L(alpha, K, eps0) < 1.0) return alpha;
  }
  return std::numeric_limits<double>::infinity();
}

namespace {

Rational rpow(const Rational& q, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= q;
  return r;
}

}  // namespace

DimensionReport hausdorff_bound(const TileDecomposition& decomp, const WeightAssignment& wa, double alpha) {
  if (!(alpha > 1.0)) throw Error(Errc::AlphaOutOfRange, "alpha must exceed 1");
  DimensionReport rep;
  rep.alpha = alpha;
  rep.K = wa.K;
  rep.eps0 = wa.eps0;
  rep.L = hausdorff_L(alpha, wa.K, wa.eps0);
  rep.exact = alpha == std::floor(alpha) && alpha <= 64.0;
  const int ia = static_cast<int>(alpha);
  Rational Lq;
  if (rep.exact) Lq = rpow(Rational(1, 3), ia - 1) + wa.K * rpow(wa.eps0, ia);
  const long double La = rep.L;
  constexpr long double kSlack = 1e-12L;

  for (const Tile& X : decomp.tiles()) {
    if (X.level >= decomp.depth()) continue;
    ++rep.tiles_checked;
    bool ok;
    double ratio;
    if (rep.exact) {
      Rational sum = 0;
      for (std::uint32_t c : X.children) sum += rpow(wa.lambda[c], ia);
      ok = sum <= Lq;
      ratio = to_double(sum / Lq);
    } else {
      long double sum = 0;
      for (std::uint32_t c : X.children)
        sum += std::pow(static_cast<long double>(to_double(wa.lambda[c])), static_cast<long double>(alpha));
      ok = sum <= La * (1 + kSlack);
      ratio = static_cast<double>(sum / La);
    }
    rep.worst_tile_ratio = std::max(rep.worst_tile_ratio, ratio);
    if (!ok) {
      rep.per_tile_ok = false;
      ++rep.tile_failures;
    }
  }

  const long double two_a = std::pow(2.0L, static_cast<long double>(alpha));
  for (int n = 0; n <= decomp.depth(); ++n) {
    long double s = 0;
    for (std::uint32_t t : decomp.level_tiles(n))
      s += std::pow(static_cast<long double>(to_double(wa.weight[t])), static_cast<long double>(alpha));
    rep.level_sums.push_back(static_cast<double>(s));
    rep.diam_level_sums.push_back(static_cast<double>(two_a * s));
    if (n > 0) {
      long double prev = rep.level_sums[n - 1];
      rep.level_ratios.push_back(static_cast<double>(s / prev));
      if (s > La * prev * (1 + kSlack)) rep.level_sums_ok = false;
    }
  }
  rep.certified = rep.L < 1.0 && rep.per_tile_ok && rep.level_sums_ok;
  rep.dimension_bound = dimension_upper_bound(wa.K, wa.eps0);
  return rep;
}

}  // namespace treeunif
