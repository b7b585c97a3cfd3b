// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chain_oracle.hpp"
#include "treeunif/analysis.hpp"
#include "treeunif/error.hpp"
#include "treeunif/generators.hpp"
#include "treeunif/good_points.hpp"
#include "treeunif/pipeline.hpp"

using namespace treeunif;

namespace {

const std::vector<std::string> kTrees{"segment", "snowflake:0.8", "csst:3", "random:40:1"};
constexpr std::size_t kPairs = 500;
constexpr std::size_t kSunInstances = 50;
constexpr std::size_t kMaxOracleTiles = 12;
const std::vector<double> kAlphas{1.2, 1.5, 2.0};

struct Line {
  std::string name;
  bool ok = true;
  std::size_t covered = 0;  // items checked across all trees
  std::ostringstream detail;

  void note(const std::string& tree, const std::string& what) {
    if (detail.tellp() > 0) detail << "; ";
    detail << tree << ": " << what;
  }
  void require(bool cond, const std::string& tree, const std::string& what) {
    if (!cond) {
      ok = false;
      note(tree, what);
    }
  }
};

RunConfig config_for(const std::string& gen) {
  RunConfig cfg;
  cfg.generate = gen;
  cfg.samples = kPairs;
  cfg.seed = 1;
  cfg.svg = true;
  cfg.alphas = kAlphas;
  return cfg;
}

std::string counts(const CheckResult& c) { return std::to_string(c.failed) + "/" + std::to_string(c.checked); }

std::size_t arc_tiles_with_children(const TileDecomposition& D) {
  std::size_t n = 0;
  for (const Tile& X : D.tiles())
    if (X.kind == TileKind::Arc && X.level < D.depth()) ++n;
  return n;
}

// Smallest alpha = 1 + k/100 with (1/3)^(alpha-1) + K eps0^alpha < 1.
double grid_dimension(int K, double eps0) {
  for (int k = 1; k < 100000; ++k) {
    double a = 1.0 + k / 100.0;
    if (std::pow(1.0 / 3.0, a - 1.0) + K * std::pow(eps0, a) < 1.0) return a;
  }
  return INFINITY;
}

void place_in_sun_instances(Line& line) {
  std::mt19937_64 rng(77);
  std::size_t done = 0;
  const std::vector<std::string> hosts{"segment@1024", "snowflake:0.8@1024", "random:15:4@256"};
  while (done < kSunInstances) {
    const std::string& g = hosts[done % hosts.size()];
    TreePtr T = generate(parse_generator(g));
    const auto leaves = T->leaves();
    PointRef a = leaves[uniform_index(rng(), leaves.size())];
    PointRef b = leaves[uniform_index(rng(), leaves.size())];
    if (a == b) continue;
    Arc J = T->arc_between(a, b);
    const double D = T->dd(a, b);
    ShadowFunction S{J, {}};
    const std::size_t k = 1 + uniform_index(rng(), 6);
    for (std::size_t i = 0; i < k; ++i) {
      PointRef p = J.trace[uniform_index(rng(), J.trace.size())];
      double s = D * std::ldexp(1.0, -static_cast<int>(uniform_index(rng(), 6)));
      S.support.push_back({p, s});
    }
    const int M = std::max(1, shadow_count_bound(*T, S));
    SunResult r;
    try {
      r = place_in_sun(*T, S, M);
    } catch (const Error& e) {
      line.require(false, g + " #" + std::to_string(done++), e.what());
      continue;
    }
    const double tol = T->grid_tolerance();
    bool clears = true;
    for (const auto& sp : S.support) clears = clears && T->dd(r.x, sp.p) >= r.sigma * sp.S - tol;
    bool exists = false;
    for (PointRef x : J.trace) {
      bool all = true;
      for (const auto& sp : S.support) all = all && T->dd(x, sp.p) >= r.sigma * sp.S;
      if (all) {
        exists = true;
        break;
      }
    }
    std::string id = g + " #" + std::to_string(done);
    line.require(clears, id, "output inside a shadow");
    line.require(exists, id, "grid oracle found no qualifying point");
    ++done;
  }
  line.covered += done;
}

void good_sets(Line& line, const std::string& tree, const TileDecomposition& D) {
  const MetricTree& T = D.tree();
  const auto& hp = D.params();
  const double tol = T.grid_tolerance();
  for (int n = 1; n <= D.depth(); ++n) {
    const double dn = std::pow(hp.delta, n);
    const auto& V = D.vertices(n);
    std::size_t bad_sep = 0, bad_good = 0;
    for (std::size_t i = 0; i < V.size(); ++i) {
      if (!is_good_double_point(T, V[i], {hp.beta, hp.gamma, dn}).good) ++bad_good;
      for (std::size_t j = i + 1; j < V.size(); ++j)
        if (T.dd(V[i], V[j]) < dn - 1e-12) ++bad_sep;
    }
    double worst = 0.0;
    for (double c : complement_diameters(T, V)) worst = std::max(worst, c);
    const std::string lvl = "level " + std::to_string(n);
    line.require(bad_sep == 0, tree, lvl + " separation failures " + std::to_string(bad_sep));
    line.require(bad_good == 0, tree, lvl + " non-good points " + std::to_string(bad_good));
    line.require(worst <= 3 * hp.beta * dn + tol, tree, lvl + " component diam " + std::to_string(worst));
    line.covered += V.size();
  }
}

void chain_oracle(Line& line, const std::string& tree, const TileDecomposition& D, std::size_t& levels_checked) {
  const MetricTree& T = D.tree();
  for (int n = 1; n <= D.depth(); ++n) {
    if (D.level_tiles(n).size() > kMaxOracleTiles) continue;
    ++levels_checked;
    const std::uint32_t step = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(T.sample_count() / 40));
    std::size_t bad = 0, pairs = 0;
    for (std::uint32_t i = 0; i < T.sample_count(); i += step)
      for (std::uint32_t j = i + step / 2 + 1; j < T.sample_count(); j += step) {
        auto c = oracle::census(D, {i}, {j}, n, 5);
        ++pairs;
        ++line.covered;
        if (c.simple_joining != 1 || !c.simple_matches || !c.all_contain) ++bad;
      }
    line.require(bad == 0, tree, "level " + std::to_string(n) + " " + std::to_string(bad) + "/" +
                                     std::to_string(pairs) + " pairs");
  }
}

}  // namespace

int main() {
  std::vector<RunResult> runs;
  for (const auto& g : kTrees) runs.push_back(run(config_for(g)));

  std::vector<Line> lines(13);
  const char* names[] = {"exact_chain_identity", "child_weight_sandwich", "chain_length_bounds",
                         "main_vertex_stability", "level_increment",    "geodesic_additivity",
                         "rho_diameter_sandwich", "tile_geometry",      "hausdorff_machinery",
                         "place_in_sun",          "maximal_good_set",   "chain_minimality_oracle",
                         "determinism"};
  for (std::size_t i = 0; i < lines.size(); ++i) lines[i].name = names[i];

  std::size_t oracle_levels = 0;
  for (std::size_t t = 0; t < kTrees.size(); ++t) {
    const std::string& g = kTrees[t];
    const RunResult& r = runs[t];
    if (!r.decomp || !r.weights || !r.rho) {
      for (auto& l : lines) l.require(false, g, "run stopped early");
      continue;
    }
    const TileDecomposition& D = *r.decomp;
    const WeightAssignment& W = *r.weights;
    const RhoMetric& R = *r.rho;
    WeightReport wr = verify_weight_bounds(D, W);

    const auto& id = wr.get("main_chain_identity");
    lines[0].covered += id.checked;
    lines[1].covered += wr.get("child_sandwich").checked;
    lines[2].covered += wr.get("child_chains").checked + wr.get("boundary_chains").checked;
    lines[0].require(id.ok && id.checked == arc_tiles_with_children(D), g, counts(id));
    lines[1].require(wr.get("child_sandwich").ok, g, counts(wr.get("child_sandwich")));
    lines[2].require(wr.get("child_chains").ok, g, "child chains " + counts(wr.get("child_chains")));
    lines[2].require(wr.get("boundary_chains").ok, g, "boundary chains " + counts(wr.get("boundary_chains")));

    CheckResult mv = R.main_vertex_check();
    lines[3].require(mv.ok, g, counts(mv));
    lines[3].covered += mv.checked;
    CheckResult li = R.level_increment_check(kPairs, 11);
    lines[4].covered += li.checked;
    lines[4].require(li.ok && li.checked >= kPairs, g, counts(li));
    GeodesicReport geo = R.geodesic_check(kPairs, 13);
    lines[5].covered += geo.samples;
    lines[5].require(geo.ok() && geo.samples >= kPairs, g,
                     std::to_string(geo.violations) + "/" + std::to_string(geo.samples));
    CheckResult rd = R.tile_diam_check();
    lines[6].covered += rd.checked;
    lines[6].require(rd.ok && rd.checked == D.tile_count(), g, counts(rd));

    CheckResult td = D.tile_diameter_check(), ts = D.tile_separation_check();
    lines[7].covered += td.checked + ts.checked;
    lines[7].require(td.ok, g, "diameter " + counts(td));
    lines[7].require(ts.ok, g, "separation " + counts(ts));

    for (double a : kAlphas) {
      DimensionReport dr = hausdorff_bound(D, W, a);
      std::ostringstream tag;
      tag << "alpha " << a;
      lines[8].covered += dr.tiles_checked;
      lines[8].require(dr.per_tile_ok, g, tag.str() + " per-tile " + std::to_string(dr.tile_failures));
      lines[8].require(dr.level_sums_ok, g, tag.str() + " level sums");
      if (g == "segment") {
        double expect = grid_dimension(W.K, to_double(W.eps0));
        lines[8].require(std::abs(dr.dimension_bound - expect) < 1e-9, g,
                         "dimension bound " + std::to_string(dr.dimension_bound));
      }
    }

    good_sets(lines[10], g, D);
    chain_oracle(lines[11], g, D, oracle_levels);
  }

  place_in_sun_instances(lines[9]);

  // Small trees whose every level has at most 12 tiles.
  for (const char* g : {"segment@300", "csst:1@300", "random:6:2@200"}) {
    auto D = TileDecomposition::build(generate(parse_generator(g)), {0.3, 2, 1.0, 0.5});
    chain_oracle(lines[11], g, *D, oracle_levels);
  }
  lines[11].require(oracle_levels > 0, "all", "no level small enough");

  for (std::size_t t = 0; t < kTrees.size(); ++t) {
    RunResult again = run(config_for(kTrees[t]));
    const RunResult& r = runs[t];
    lines[12].covered += 2 + r.svgs.size();
    lines[12].require(again.decomposition_json == r.decomposition_json, kTrees[t], "decomposition.json differs");
    lines[12].require(again.skeleton_json == r.skeleton_json, kTrees[t], "skeleton.json differs");
    lines[12].require(again.svgs == r.svgs && !r.svgs.empty(), kTrees[t], "SVG differs");
  }

  bool all = true;
  for (const auto& l : lines) {
    std::printf("%s %s  checked %zu%s%s\n", l.ok ? "PASS" : "FAIL", l.name.c_str(), l.covered, l.ok ? "" : "  ",
                l.ok ? "" : l.detail.str().c_str());
    all = all && l.ok;
  }
  return all ? 0 : 1;
}
