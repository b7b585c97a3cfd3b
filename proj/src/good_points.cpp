#include "treeunif/good_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treeunif/error.hpp"

namespace treeunif {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::PaperFormula: return "formula";
    case Provenance::User: return "user";
    case Provenance::Adaptive: return "adaptive";
    case Provenance::Measured: return "measured";
  }
  return "?";
}

const char* to_string(Violation v) noexcept {
  switch (v) {
    case Violation::None: return "none";
    case Violation::NotDouble: return "not_double";
    case Violation::DoubleDelta: return "double_delta";
    case Violation::BranchDistance: return "branch_distance";
  }
  return "?";
}

long long packing_constant(long long N) { return N * N * N * N; }

long long shadow_count_from_doubling(long long N) { return N * N * N + 2; }

ConstantsBundle derive_constants_from(long long Nprime, long long M) {
  if (Nprime < 1 || M < 1) throw Error(Errc::InvalidInput, "constants need N' >= 1 and M >= 1");
  ConstantsBundle c;
  c.Nprime = Nprime;
  c.M = M;
  const mpz_class m(std::to_string(M)), np(std::to_string(Nprime));
  c.sigma = Rational(mpz_class(1), 36 * m * m);
  c.gamma = c.sigma * c.sigma / 2;
  c.beta = Rational(6 * np);
  Rational a = 1 / (6 * c.beta), b = c.gamma / (3 * c.beta);
  c.delta = (a < b ? a : b) / 2;
  for (const char* k : {"Nprime", "M", "sigma", "gamma", "beta", "delta"}) c.provenance[k] = Provenance::PaperFormula;
  return c;
}

ConstantsBundle derive_constants(long long N) {
  if (N < 1) throw Error(Errc::InvalidInput, "doubling constant must be >= 1");
  ConstantsBundle c = derive_constants_from(packing_constant(N), shadow_count_from_doubling(N));
  c.N = N;
  c.provenance["N"] = Provenance::Measured;
  return c;
}

namespace {

bool contains(const std::vector<PointRef>& sorted, PointRef p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

// Shrinks [lo,hi] alternately from both ends while the diameter stays >= target.
void trim_centered(const MetricTree& tree, const std::vector<PointRef>& tr, std::size_t& lo, std::size_t& hi,
                   double target) {
  bool left = true;
  int stuck = 0;
  while (hi - lo >= 2 && stuck < 2) {
    std::size_t nlo = left ? lo + 1 : lo, nhi = left ? hi : hi - 1;
    if (tree.dd(tr[nlo], tr[nhi]) >= target) {
      lo = nlo;
      hi = nhi;
      stuck = 0;
    } else {
      ++stuck;
    }
    left = !left;
  }
}

}  // namespace

Arc find_avoiding_subarc(const MetricTree& tree, const Arc& J, const Arc& Jp, const std::vector<PointRef>& A,
                         int M) {
  if (M < 1) throw Error(Errc::InvalidInput, "M must be >= 1");
  if (Jp.degenerate()) throw Error(Errc::InvalidInput, "J' must be non-degenerate");
  {
    std::vector<PointRef> onj = J.trace;
    std::sort(onj.begin(), onj.end());
    for (PointRef p : Jp.trace)
      if (!contains(onj, p)) throw Error(Errc::InvalidInput, "J' is not a sub-arc of J");
  }
  std::vector<PointRef> a = A;
  std::sort(a.begin(), a.end());
  const auto& tr = Jp.trace;
  auto cuts = tree.equal_diameter_cuts(Jp, M + 1);
  std::size_t pick = cuts.size();
  for (std::size_t i = 0; i + 1 < cuts.size() && pick == cuts.size(); ++i) {
    bool free = true;
    for (std::size_t k = cuts[i] + 1; k < cuts[i + 1]; ++k)
      if (contains(a, tr[k])) {
        free = false;
        break;
      }
    if (free) pick = i;
  }
  if (pick == cuts.size()) throw Error(Errc::HypothesisViolated, "A meets the interior of every piece");
  Arc piece = tree.subarc(Jp, cuts[pick], cuts[pick + 1]);
  if (piece.trace.size() < 4) throw Error(Errc::GridTooCoarse, "piece too short to divide into thirds");
  auto thirds = tree.equal_diameter_cuts(piece, 3);
  std::size_t lo = cuts[pick] + thirds[1], hi = cuts[pick] + thirds[2];
  double target = tree.dd(tr.front(), tr.back()) / (6.0 * M);
  trim_centered(tree, tr, lo, hi, target);
  return tree.subarc(Jp, lo, hi);
}

AvoidanceCheck check_avoiding_subarc(const MetricTree& tree, const Arc& Jp, const Arc& I,
                                     const std::vector<PointRef>& A, int M) {
  AvoidanceCheck c;
  c.tolerance = tree.grid_tolerance();
  c.diam = tree.dd(I.first, I.second);
  c.target = tree.dd(Jp.first, Jp.second) / (6.0 * M);
  std::vector<PointRef> targets = A;
  targets.push_back(Jp.first);
  targets.push_back(Jp.second);
  c.distance = std::numeric_limits<double>::infinity();
  for (PointRef s : I.trace)
    for (PointRef t : targets) c.distance = std::min(c.distance, tree.dd(s, t));
  c.ok = std::abs(c.diam - c.target) <= c.tolerance && c.distance >= c.target - c.tolerance;
  return c;
}

int shadow_count_bound(const MetricTree& tree, const ShadowFunction& S) {
  // Shrinking I to the hull of the counted points only helps, so sub-arcs
  // with endpoints in the support suffice.
  const auto& tr = S.J.trace;
  std::vector<std::pair<std::size_t, double>> pos;
  for (const auto& sp : S.support) {
    if (sp.S <= 0.0) continue;
    auto it = std::find(tr.begin(), tr.end(), sp.p);
    if (it == tr.end()) throw Error(Errc::InvalidInput, "shadow support point not on J");
    pos.push_back({static_cast<std::size_t>(it - tr.begin()), sp.S});
  }
  std::sort(pos.begin(), pos.end());
  int best = 0;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i; j < pos.size(); ++j) {
      double diam = tree.dd(tr[pos[i].first], tr[pos[j].first]);
      int cnt = 0;
      for (std::size_t k = i; k <= j; ++k)
        if (pos[k].second >= diam) ++cnt;
      best = std::max(best, cnt);
    }
  return best;
}

double sun_margin(const MetricTree& tree, const ShadowFunction& S, PointRef x, double sigma) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& sp : S.support) m = std::min(m, tree.dd(x, sp.p) - sigma * sp.S);
  return m;
}

SunResult place_in_sun(const MetricTree& tree, const ShadowFunction& S, int M) {
  if (M < 1) throw Error(Errc::InvalidInput, "M must be >= 1");
  const Arc& J = S.J;
  if (J.degenerate()) throw Error(Errc::InvalidInput, "shadow arc is degenerate");
  const double D = tree.dd(J.first, J.second);
  for (const auto& sp : S.support)
    if (sp.S < 0.0 || sp.S > D + tree.grid_tolerance())
      throw Error(Errc::InvalidInput, "shadow values must lie in [0, diam J]");
  if (shadow_count_bound(tree, S) > M) throw Error(Errc::HypothesisViolated, "shadow count exceeds M");

  SunResult res;
  res.sigma = 1.0 / (36.0 * M * M);
  const double tol = tree.grid_tolerance();
  bool all_zero = std::all_of(S.support.begin(), S.support.end(), [](const ShadowPoint& s) { return s.S == 0.0; });
  if (all_zero) {
    auto cuts = J.trace.size() >= 3 ? tree.equal_diameter_cuts(J, 2) : std::vector<std::size_t>{0, 0};
    res.x = J.trace[cuts[1]];
    res.margin = sun_margin(tree, S, res.x, res.sigma);
    return res;
  }

  const double lambda = 1.0 / (6.0 * M);
  Arc Jn = J;
  double threshold = D;
  for (int n = 0; n < 64; ++n) {
    std::vector<PointRef> An;
    std::vector<PointRef> on = Jn.trace;
    std::sort(on.begin(), on.end());
    for (const auto& sp : S.support)
      if (sp.S > 0.0 && sp.S >= threshold && contains(on, sp.p)) An.push_back(sp.p);
    try {
      Arc next = find_avoiding_subarc(tree, J, Jn, An, M);
      if (next.trace.size() < 2) break;
      Jn = std::move(next);
    } catch (const Error& e) {
      if (e.code() == Errc::GridTooCoarse) break;
      throw;
    }
    threshold *= lambda;
  }
  res.x = Jn.trace[Jn.trace.size() / 2];
  res.margin = sun_margin(tree, S, res.x, res.sigma);
  if (res.margin < -tol) {
    double best = -std::numeric_limits<double>::infinity();
    for (PointRef p : J.trace) {
      double m = sun_margin(tree, S, p, res.sigma);
      if (m > best) {
        best = m;
        res.x = p;
      }
    }
    res.margin = best;
    res.used_fallback = true;
    if (best < -tol) throw Error(Errc::HypothesisViolated, "no grid point clears all shadows");
  }
  return res;
}

std::vector<BranchSize> branch_sizes(const MetricTree& tree) {
  std::vector<BranchSize> out;
  for (PointRef b : tree.branch_points()) out.push_back({b, tree.branch_data(b).H()});
  return out;
}

namespace {

// Absorbs floating-point roundoff in dd so that grid points at exactly the
// required distance are accepted.
constexpr double kRoundoff = 1e-12;

GoodVerdict judge(const MetricTree& tree, PointRef x, const GoodPointParams& params,
                  const std::vector<BranchSize>& bs) {
  GoodVerdict v;
  BranchData bd = tree.branch_data(x);
  if (bd.kind != PointKind::Double) {
    v.violation = Violation::NotDouble;
    return v;
  }
  if (bd.D() < params.beta * params.Delta - kRoundoff) {
    v.violation = Violation::DoubleDelta;
    v.value = bd.D();
    v.required = params.beta * params.Delta;
    return v;
  }
  for (const auto& b : bs) {
    double need = params.gamma * std::min(b.H, params.Delta);
    double d = tree.dd(x, b.b);
    if (d < need - kRoundoff) {
      v.violation = Violation::BranchDistance;
      v.witness = b.b;
      v.value = d;
      v.required = need;
      return v;
    }
  }
  v.good = true;
  return v;
}

}  // namespace

GoodVerdict is_good_double_point(const MetricTree& tree, PointRef x, const GoodPointParams& params) {
  tree.check_point(x);
  return judge(tree, x, params, branch_sizes(tree));
}

ArcPointResult good_double_point_on_arc(const MetricTree& tree, const Arc& J, double Delta, double gamma) {
  if (J.degenerate() || tree.dd(J.first, J.second) < Delta)
    throw Error(Errc::InvalidInput, "arc diameter below Delta");
  const auto bs = branch_sizes(tree);
  const double tol = tree.grid_tolerance();
  ShadowFunction S{J, {}};
  S.support.push_back({J.first, Delta});
  for (std::size_t i = 1; i + 1 < J.trace.size(); ++i)
    for (const auto& b : bs)
      if (b.b == J.trace[i]) S.support.push_back({b.b, std::min(b.H, Delta)});
  S.support.push_back({J.second, Delta});

  auto ratio_ok = [&](PointRef x) {
    if (tree.degree(x) != 2) return false;
    for (const auto& b : bs)
      if (tree.dd(x, b.b) < gamma * std::min(b.H, Delta) - tol) return false;
    return true;
  };

  ArcPointResult res;
  res.M = std::max(1, shadow_count_bound(tree, S));
  try {
    SunResult sun = place_in_sun(tree, S, res.M);
    res.x = sun.x;
    if (ratio_ok(res.x) && res.x != J.first && res.x != J.second) return res;
  } catch (const Error& e) {
    if (e.code() != Errc::HypothesisViolated && e.code() != Errc::GridTooCoarse) throw;
  }
  res.used_fallback = true;
  double best = -1.0;
  bool found = false;
  for (std::size_t i = 1; i + 1 < J.trace.size(); ++i) {
    PointRef x = J.trace[i];
    if (tree.degree(x) != 2) continue;
    double r = std::numeric_limits<double>::infinity();
    for (const auto& b : bs) r = std::min(r, (tree.dd(x, b.b) + tol) / std::min(b.H, Delta));
    if (!found || r > best) {
      best = r;
      res.x = x;
      found = true;
    }
  }
  if (!found || best < gamma) throw Error(Errc::GammaTooLarge, "no grid point on the arc clears the branch points");
  return res;
}

std::vector<double> complement_diameters(const MetricTree& tree, const std::vector<PointRef>& V) {
  const std::size_t S = tree.sample_count();
  std::vector<char> is_v(S, 0);
  for (PointRef v : V) is_v[v.id] = 1;
  std::vector<int> comp(S, -1);
  std::vector<double> out;
  std::vector<PointRef> stack, extremal;
  for (std::uint32_t s = 0; s < S; ++s) {
    if (is_v[s] || comp[s] >= 0) continue;
    int c = static_cast<int>(out.size());
    extremal.clear();
    stack.assign(1, {s});
    comp[s] = c;
    std::vector<std::uint32_t> touched;
    while (!stack.empty()) {
      PointRef p = stack.back();
      stack.pop_back();
      if (tree.is_node(p) && tree.degree(p) == 1) extremal.push_back(p);
      for (std::uint32_t q : tree.neighbors(p)) {
        if (is_v[q]) {
          if (std::find(touched.begin(), touched.end(), q) == touched.end()) {
            touched.push_back(q);
            extremal.push_back({q});
          }
        } else if (comp[q] < 0) {
          comp[q] = c;
          stack.push_back({q});
        }
      }
    }
    double d = 0.0;
    for (std::size_t i = 0; i < extremal.size(); ++i)
      for (std::size_t j = i + 1; j < extremal.size(); ++j) d = std::max(d, tree.dd(extremal[i], extremal[j]));
    out.push_back(d);
  }
  return out;
}

std::vector<PointRef> maximal_good_set(const MetricTree& tree, const GoodPointParams& params,
                                       const std::vector<PointRef>& seed) {
  if (!(params.beta >= 1.0) || !(params.gamma > 0.0) || !(params.Delta > 0.0))
    throw Error(Errc::InvalidInput, "need beta >= 1, gamma > 0, Delta > 0");
  const auto bs = branch_sizes(tree);
  for (std::size_t i = 0; i < seed.size(); ++i) {
    tree.check_point(seed[i]);
    if (!judge(tree, seed[i], params, bs))
      throw Error(Errc::InvalidInput, "seed point " + tree.describe(seed[i]) + " is not good");
    for (std::size_t j = 0; j < i; ++j)
      if (tree.dd(seed[i], seed[j]) < params.Delta - kRoundoff) throw Error(Errc::InvalidInput, "seed is not Delta-separated");
  }

  std::vector<char> blocked(tree.sample_count(), 0);
  auto block = [&](PointRef c, double r) {
    for (PointRef p : tree.ball(c, r - kRoundoff)) blocked[p.id] = 1;
  };
  for (const auto& b : bs) {
    blocked[b.b.id] = 1;
    block(b.b, params.gamma * std::min(b.H, params.Delta));
  }
  for (PointRef p : tree.leaves()) blocked[p.id] = 1;
  std::vector<PointRef> V = seed;
  for (PointRef v : seed) block(v, params.Delta);

  const double need_D = params.beta * params.Delta - kRoundoff;
  for (PointRef x : tree.dfs_order()) {
    if (blocked[x.id]) continue;
    if (tree.branch_data(x).D() < need_D) continue;
    V.push_back(x);
    block(x, params.Delta);
  }
  std::sort(V.begin(), V.end());

  const double bound = 3.0 * params.beta * params.Delta + tree.grid_tolerance();
  auto diams = complement_diameters(tree, V);
  for (std::size_t i = 0; i < diams.size(); ++i)
    if (diams[i] > bound)
      throw Error(Errc::PostVerificationFailed,
                  "component " + std::to_string(i) + " has diameter " + std::to_string(diams[i]) +
                      " > 3*beta*Delta = " + std::to_string(bound));
  return V;
}

}  // namespace treeunif
