#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "treeunif/error.hpp"
#include "treeunif/generators.hpp"
#include "treeunif/rho_metric.hpp"

using namespace treeunif;

namespace {

std::shared_ptr<const RhoMetric> make_rho(const std::string& gen, double delta, int depth, double beta = 2.0,
                                          double gamma = 0.25) {
  auto D = TileDecomposition::build(generate(parse_generator(gen)), {delta, depth, beta, gamma});
  auto W = std::make_shared<const WeightAssignment>(assign_weights(*D, default_eps0(D->neighbor_stats().K)));
  return std::make_shared<const RhoMetric>(D, W);
}

}  // namespace

TEST_CASE("rho on the unit segment") {
  auto R = make_rho("segment@4096", 0.1, 3);
  const auto& D = R->decomp();
  CHECK(R->rho({0}, {0}).value == 0);
  CHECK(R->rho_n({0}, {1}, 0) == 1);
  // The two leaves are the main pair of the root's level-one arc chain.
  for (int n = 0; n <= R->n_max(); ++n) CHECK(R->rho_n({0}, {1}, n) == R->rho_n({1}, {0}, n));
  for (PointRef v : D.vertices(1)) {
    CHECK(R->rho_n({0}, v, 1) > 0);
    CHECK(R->rho_n({0}, v, 1) <= 1);
  }
}

TEST_CASE("rho checks hold on several trees") {
  for (const char* g : {"segment@4096", "csst:2@1024", "random:25:11@1024"}) {
    CAPTURE(g);
    auto R = make_rho(g, 0.1, 3);
    CHECK(R->main_vertex_check().ok);
    CHECK(R->boundary_pair_check().ok);
    CHECK(R->level_increment_check(200, 3).ok);
    CHECK(R->basics_check(200, 5).ok);
    CHECK(R->tile_diam_check().ok);
    GeodesicReport geo = R->geodesic_check(200, 7);
    CHECK(geo.samples == 200);
    CHECK(geo.ok());
  }
}

TEST_CASE("triangle inequality and monotone slack") {
  auto R = make_rho("csst:2@512", 0.1, 3);
  const auto& T = R->decomp().tree();
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    PointRef x{static_cast<std::uint32_t>(uniform_index(rng(), T.sample_count()))};
    PointRef y{static_cast<std::uint32_t>(uniform_index(rng(), T.sample_count()))};
    PointRef z{static_cast<std::uint32_t>(uniform_index(rng(), T.sample_count()))};
    RhoEstimate xy = R->rho(x, y), yz = R->rho(y, z), xz = R->rho(x, z);
    CHECK(xz.value <= xy.value + yz.value + xz.upper_slack + xy.upper_slack + yz.upper_slack);
    CHECK(xy.value == R->rho(y, x).value);
    if (x != y) CHECK(xy.upper_slack <= 2 * inverse_power_of_three(R->n_max()));
  }
}

TEST_CASE("m level") {
  auto R = make_rho("segment@4096", 0.1, 3);
  const auto& T = R->decomp().tree();
  CHECK_THROWS_AS(R->m_level({0}, {0}), Error);
  MLevel far = R->m_level({0}, {1});
  CHECK(far.level == 0);
  CHECK_FALSE(far.saturated);
  MLevel near = R->m_level(T.edge_point(0, 100), T.edge_point(0, 101));
  CHECK(near.level >= 1);
  CHECK(near.saturated == (near.level == R->n_max()));
}

TEST_CASE("geodesic skeleton is a tree and its paths track rho") {
  auto R = make_rho("csst:1@512", 0.1, 2);
  GeodesicSkeleton sk = R->build_geodesic_skeleton();
  REQUIRE_FALSE(sk.vertices.empty());
  CHECK(sk.edges.size() + 1 == sk.vertices.size());
  for (std::size_t i = 0; i < sk.vertices.size(); i += 3)
    for (std::size_t j = i + 1; j < sk.vertices.size(); j += 5) {
      auto [len, slack] = sk.path(sk.vertices[i], sk.vertices[j]);
      RhoEstimate est = R->rho(sk.vertices[i], sk.vertices[j]);
      Rational d = len - est.value;
      if (d < 0) d = -d;
      CHECK(d <= slack + est.upper_slack);
    }
}

TEST_CASE("uniform index stays in range") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(uniform_index(rng(), 7) < 7);
  CHECK(uniform_index(~0ull, 5) == 4);
  CHECK(uniform_index(0, 5) == 0);
}
