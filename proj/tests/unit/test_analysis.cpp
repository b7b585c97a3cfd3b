#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "treeunif/analysis.hpp"
#include "treeunif/error.hpp"
#include "treeunif/generators.hpp"

using namespace treeunif;

namespace {

struct Fixture {
  DecompPtr D;
  WeightsPtr W;
  std::shared_ptr<const RhoMetric> R;
};

Fixture make(const std::string& gen, double delta = 0.1, int depth = 3) {
  Fixture f;
  f.D = TileDecomposition::build(generate(parse_generator(gen)), {delta, depth, 2.0, 0.25});
  f.W = std::make_shared<const WeightAssignment>(assign_weights(*f.D, default_eps0(f.D->neighbor_stats().K)));
  f.R = std::make_shared<const RhoMetric>(f.D, f.W);
  return f;
}

}  // namespace

TEST_CASE("Hausdorff constant") {
  // tests/oracles/frozen.json: hausdorff
  CHECK(hausdorff_L(1.5, 10, Rational(1, 30)) == doctest::Approx(0.6382083311346441).epsilon(1e-12));
  CHECK(hausdorff_L(2.0, 3, Rational(1, 9)) == doctest::Approx(1.0 / 3 + 3.0 / 81));
  const double b = dimension_upper_bound(10, Rational(1, 30));
  CHECK(hausdorff_L(b, 10, Rational(1, 30)) < 1.0);
  CHECK(hausdorff_L(b - 0.01, 10, Rational(1, 30)) >= 1.0);
}

TEST_CASE("per-tile Hausdorff sums") {
  Fixture f = make("csst:2@1024");
  for (double alpha : {1.2, 1.5, 2.0}) {
    CAPTURE(alpha);
    DimensionReport r = hausdorff_bound(*f.D, *f.W, alpha);
    CHECK(r.exact == (alpha == 2.0));
    CHECK(r.per_tile_ok);
    CHECK(r.level_sums_ok);
    CHECK(r.worst_tile_ratio <= 1.0 + 1e-12);
    CHECK(r.tiles_checked > 0);
    CHECK(r.level_sums.size() == static_cast<std::size_t>(f.D->depth() + 1));
    CHECK(r.level_sums[0] == doctest::Approx(1.0));
    CHECK(r.certified == (r.L < 1.0));
    CHECK(hausdorff_L(r.dimension_bound, r.K, r.eps0) < 1.0);
  }
  CHECK_THROWS_AS(hausdorff_bound(*f.D, *f.W, 1.0), Error);
  try {
    hausdorff_bound(*f.D, *f.W, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AlphaOutOfRange);
  }
}

TEST_CASE("weak quasisymmetry sampling") {
  Fixture f = make("segment@2048");
  QsReport q = verify_weak_qs(*f.R, 200, 9);
  CHECK(q.samples > 150);
  // Every seventh triple has y = z, so the ratio 1 is attained.
  CHECK(q.H_empirical >= 1.0);
  CHECK(std::isfinite(q.H_empirical));
  REQUIRE_FALSE(q.quantiles.empty());
  CHECK(q.quantiles.back().first == 1.0);
  CHECK(q.quantiles.back().second == doctest::Approx(q.H_empirical));
  QsReport again = verify_weak_qs(*f.R, 200, 9);
  CHECK(again.H_empirical == q.H_empirical);
}

TEST_CASE("rho doubling estimate") {
  Fixture f = make("segment@2048");
  DoublingEstimate d = verify_rho_doubling(*f.R, {0.5, 0.25, 0.125}, 0.5, 120);
  CHECK(d.packing >= 2);
  CHECK(d.N >= 1);
  CHECK_THROWS_AS(verify_rho_doubling(*f.R, {}, 0.5), Error);
  CHECK_THROWS_AS(verify_rho_doubling(*f.R, {0.5}, 1.5), Error);
}
