#include "treeunif/rho_metric.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <random>

#include "treeunif/error.hpp"

namespace treeunif {

std::size_t uniform_index(std::uint64_t bits, std::size_t n) {
  double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)));
}

std::pair<Rational, Rational> GeodesicSkeleton::path(PointRef u, PointRef v) const {
  std::map<std::uint32_t, std::vector<std::size_t>> adj;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].a.id].push_back(i);
    adj[edges[i].b.id].push_back(i);
  }
  std::map<std::uint32_t, std::pair<std::uint32_t, std::size_t>> prev;
  std::queue<std::uint32_t> q;
  q.push(u.id);
  prev[u.id] = {u.id, SIZE_MAX};
  while (!q.empty()) {
    std::uint32_t a = q.front();
    q.pop();
    if (a == v.id) break;
    for (std::size_t ei : adj[a]) {
      std::uint32_t b = edges[ei].a.id == a ? edges[ei].b.id : edges[ei].a.id;
      if (prev.count(b)) continue;
      prev[b] = {a, ei};
      q.push(b);
    }
  }
  if (!prev.count(v.id)) throw Error(Errc::InvalidInput, "skeleton vertices are not connected");
  Rational len = 0, slack = 0;
  for (std::uint32_t c = v.id; c != u.id; c = prev[c].first) {
    len += edges[prev[c].second].length;
    slack += edges[prev[c].second].slack;
  }
  return {len, slack};
}

RhoMetric::RhoMetric(DecompPtr decomp, WeightsPtr weights) : decomp_(std::move(decomp)), weights_(std::move(weights)) {
  if (weights_->weight.size() != decomp_->tile_count())
    throw Error(Errc::InvalidInput, "weights do not match the decomposition");
}

Rational RhoMetric::rho_n(PointRef x, PointRef y, int n) const {
  if (n < 0 || n > n_max()) throw Error(Errc::LevelOutOfRange, "level " + std::to_string(n) + " not built");
  std::uint32_t lo = std::min(x.id, y.id), hi = std::max(x.id, y.id);
  std::uint64_t key = (static_cast<std::uint64_t>(lo) << 36) | (static_cast<std::uint64_t>(hi) << 8) |
                      static_cast<std::uint64_t>(n);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  Rational v;
  if (x == y) {
    auto ts = decomp_->tiles_containing(x, n);
    v = weights_->weight[ts[0]];
    for (std::uint32_t t : ts) v = std::min(v, weights_->weight[t]);
  } else {
    v = chain_length_w(decomp_->simple_chain(x, y, n), *weights_, *decomp_);
  }
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, v);
  return v;
}

RhoEstimate RhoMetric::rho(PointRef x, PointRef y) const {
  RhoEstimate est;
  const int N = n_max();
  est.level = N;
  est.finite_value = rho_n(x, y, N);
  if (x == y) {
    est.value = 0;
    est.upper_slack = 0;
  } else {
    est.value = est.finite_value;
    Chain ch = decomp_->simple_chain(x, y, N);
    est.upper_slack = (weights_->weight[ch.tiles.front()] + weights_->weight[ch.tiles.back()]) / 2;
  }
  est.cauchy_residual = 0;
  for (int n = std::max(0, N - 3); n < N; ++n) {
    Rational d = rho_n(x, y, n) - est.finite_value;
    if (d < 0) d = -d;
    est.cauchy_residual = std::max(est.cauchy_residual, d);
  }
  return est;
}

MLevel RhoMetric::m_level(PointRef x, PointRef y) const {
  if (x == y) throw Error(Errc::InvalidInput, "m(x,y) needs x != y");
  MLevel m;
  for (int n = 0; n <= n_max(); ++n) {
    bool meet = false;
    for (std::uint32_t a : decomp_->tiles_containing(x, n))
      for (std::uint32_t b : decomp_->tiles_containing(y, n)) meet = meet || decomp_->tiles_intersect(a, b);
    if (!meet) break;
    m.level = n;
  }
  m.saturated = m.level == n_max();
  return m;
}

GeodesicReport RhoMetric::geodesic_check(std::size_t samples, std::uint64_t seed) const {
  GeodesicReport rep;
  const MetricTree& T = decomp_->tree();
  const int N = n_max();
  const Rational cap = inverse_power_of_three(N);
  std::mt19937_64 rng(seed);
  const std::size_t S = T.sample_count();
  std::size_t attempts = 0;
  while (rep.samples < samples && attempts < 50 * samples + 1000) {
    ++attempts;
    PointRef x{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    PointRef y{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    Arc arc = T.arc_between(x, y);
    if (arc.trace.size() < 3) continue;
    PointRef z = arc.trace[1 + uniform_index(rng(), arc.trace.size() - 2)];
    ++rep.samples;
    Rational res = rho_n(x, y, N) - rho_n(x, z, N) - rho_n(z, y, N);
    if (res < 0) res = -res;
    Rational ws = 0;
    for (std::uint32_t t : decomp_->tiles_containing(z, N)) ws = std::max(ws, weights_->weight[t]);
    Rational bound = cap + ws;
    rep.max_residual = std::max(rep.max_residual, res);
    rep.max_ratio = std::max(rep.max_ratio, to_double(res / bound));
    if (res > bound) {
      ++rep.violations;
      if (rep.witnesses.size() < 8)
        rep.witnesses.push_back(T.describe(x) + " | " + T.describe(z) + " | " + T.describe(y));
    }
  }
  return rep;
}

TileRhoDiam RhoMetric::tile_rho_diam(std::uint32_t t) const {
  const Tile& X = decomp_->tile(t);
  const Rational& w = weights_->weight[t];
  const Rational& e0 = weights_->eps0;
  TileRhoDiam r;
  r.lower = e0 * e0 * w;
  r.upper = 2 * w;
  r.slack = inverse_power_of_three(n_max());
  std::vector<PointRef> pts = X.boundary;
  if (weights_->main[t]) {
    pts.push_back(weights_->main[t]->first);
    pts.push_back(weights_->main[t]->second);
  }
  for (std::uint32_t c : X.children)
    if (weights_->main[c]) {
      pts.push_back(weights_->main[c]->first);
      pts.push_back(weights_->main[c]->second);
    }
  auto mids = decomp_->segment_midpoints(t);
  if (mids.size() > 16) mids.resize(16);
  pts.insert(pts.end(), mids.begin(), mids.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  r.sampled = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) r.sampled = std::max(r.sampled, rho_n(pts[i], pts[j], n_max()));
  r.ok = r.lower - r.slack <= r.sampled && r.sampled <= r.upper + r.slack;
  return r;
}

GeodesicSkeleton RhoMetric::build_geodesic_skeleton() const {
  GeodesicSkeleton sk;
  const int N = n_max();
  sk.vertices = decomp_->vertices(N);
  const Rational& e0 = weights_->eps0;
  for (std::uint32_t t : decomp_->level_tiles(N)) {
    const Tile& X = decomp_->tile(t);
    if (X.kind != TileKind::Arc) continue;
    const Rational& w = weights_->weight[t];
    const auto [p, q] = *weights_->main[t];
    sk.edges.push_back({p, q, w, true, Rational(0), t});
    for (PointRef u : X.boundary)
      if (u != p && u != q) sk.edges.push_back({p, u, w, false, (1 - e0) * w, t});
  }
  return sk;
}

CheckResult RhoMetric::main_vertex_check() const {
  CheckResult c("main_vertex_stability");
  for (const Tile& X : decomp_->tiles()) {
    if (X.kind != TileKind::Arc) continue;
    const auto [p, q] = *weights_->main[X.id];
    for (int k = X.level; k <= n_max(); ++k)
      c.expect(rho_n(p, q, k) == weights_->weight[X.id],
               "tile " + std::to_string(X.id) + " level " + std::to_string(k));
  }
  return c;
}

CheckResult RhoMetric::boundary_pair_check() const {
  CheckResult c("boundary_pair_sandwich");
  const Rational& e0 = weights_->eps0;
  for (const Tile& X : decomp_->tiles()) {
    if (X.kind != TileKind::Arc) continue;
    const Rational& w = weights_->weight[X.id];
    const auto& B = X.boundary;
    for (std::size_t i = 0; i < B.size(); ++i)
      for (std::size_t j = i + 1; j < B.size(); ++j)
        for (int k = X.level; k <= n_max(); ++k) {
          Rational r = rho_n(B[i], B[j], k);
          c.expect(e0 * w <= r && r <= w, "tile " + std::to_string(X.id) + " level " + std::to_string(k));
        }
  }
  return c;
}

CheckResult RhoMetric::level_increment_check(std::size_t samples, std::uint64_t seed) const {
  CheckResult c("level_increment");
  const MetricTree& T = decomp_->tree();
  std::mt19937_64 rng(seed);
  const std::size_t S = T.sample_count();
  std::size_t pairs = 0;
  while (pairs < samples) {
    PointRef x{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    PointRef y{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    if (x == y) continue;
    ++pairs;
    std::vector<Rational> r(n_max() + 1);
    for (int n = 0; n <= n_max(); ++n) r[n] = rho_n(x, y, n);
    for (int n = 0; n <= n_max(); ++n)
      for (int k = n; k <= n_max(); ++k)
        c.expect(r[k] <= r[n] + inverse_power_of_three(n),
                 T.describe(x) + " / " + T.describe(y) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  return c;
}

CheckResult RhoMetric::basics_check(std::size_t samples, std::uint64_t seed) const {
  CheckResult c("rho_n_basics");
  const MetricTree& T = decomp_->tree();
  std::mt19937_64 rng(seed);
  const std::size_t S = T.sample_count();
  for (std::size_t i = 0; i < samples; ++i) {
    PointRef x{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    PointRef y{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    PointRef z{static_cast<std::uint32_t>(uniform_index(rng(), S))};
    for (int n = 0; n <= n_max(); ++n) {
      Rational xy = rho_n(x, y, n);
      if (x != y) {
        Rational yx = chain_length_w(decomp_->simple_chain(y, x, n), *weights_, *decomp_);
        c.expect(xy == yx, "asymmetric at " + T.describe(x) + " / " + T.describe(y));
      }
      c.expect(xy <= rho_n(x, z, n) + rho_n(z, y, n), "triangle at level " + std::to_string(n));
    }
  }
  return c;
}

CheckResult RhoMetric::tile_diam_check() const {
  CheckResult c("rho_diameter_sandwich");
  for (const Tile& X : decomp_->tiles()) {
    auto r = tile_rho_diam(X.id);
    c.expect(r.ok, "tile " + std::to_string(X.id) + " sampled " + to_fraction_string(r.sampled));
  }
  return c;
}

}  // namespace treeunif
