#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "treeunif/error.hpp"
#include "treeunif/generators.hpp"
#include "treeunif/weights.hpp"

using namespace treeunif;

namespace {

DecompPtr build(const std::string& gen, double delta, int depth, double beta = 1.0, double gamma = 0.5) {
  return TileDecomposition::build(generate(parse_generator(gen)), {delta, depth, beta, gamma});
}

}  // namespace

TEST_CASE("main chain ratios follow the 1/3 and 1/(3(r-2)) pattern") {
  // tests/oracles/frozen.json: main_chain
  const std::map<int, std::vector<Rational>> frozen{
      {3, {Rational(1, 3), Rational(1, 3), Rational(1, 3)}},
      {5, {Rational(1, 3), Rational(1, 9), Rational(1, 9), Rational(1, 9), Rational(1, 3)}}};
  std::set<int> seen;
  for (const char* g : {"segment@4096", "csst:2@1024", "random:30:3@1024"}) {
    auto D = build(g, 0.1, 3, 2.0, 0.25);
    WeightAssignment wa = assign_weights(*D, default_eps0(D->neighbor_stats().K));
    for (const Tile& X : D->tiles()) {
      if (X.kind != TileKind::Arc || X.level >= D->depth()) continue;
      const int r = wa.main_chain_length[X.id];
      REQUIRE(r >= 3);
      Chain ch = D->simple_chain(wa.main[X.id]->first, wa.main[X.id]->second, X.level + 1);
      REQUIRE(static_cast<int>(ch.size()) == r);
      Rational sum = 0;
      for (int i = 0; i < r; ++i) {
        Rational expect = (i == 0 || i + 1 == r) ? Rational(1, 3) : Rational(1, 3 * (r - 2));
        CHECK(wa.lambda[ch.tiles[i]] == expect);
        sum += wa.lambda[ch.tiles[i]];
        if (frozen.count(r)) CHECK(wa.lambda[ch.tiles[i]] == frozen.at(r)[i]);
      }
      CHECK(sum == 1);
      CHECK(chain_length_w(ch, wa, *D) == wa.w(X.id));
      seen.insert(r);
    }
  }
  CHECK(seen.count(3) + seen.count(5) >= 1);
}

TEST_CASE("weight report on several trees") {
  for (const char* g : {"segment@4096", "snowflake:0.8@4096", "csst:2@1024", "random:25:11@1024"}) {
    CAPTURE(g);
    auto D = build(g, 0.1, 3, 2.0, 0.25);
    REQUIRE(D->validate_delta().ok());
    WeightAssignment wa = assign_weights(*D, default_eps0(D->neighbor_stats().K));
    WeightReport rep = verify_weight_bounds(*D, wa);
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CHECK(c.ok);
    }
    CHECK(wa.w(D->root()) == 1);
    for (const Tile& X : D->tiles()) {
      CHECK(wa.w(X.id) > 0);
      CHECK(wa.w(X.id) <= inverse_power_of_three(X.level));
      for (std::uint32_t c : X.children) {
        CHECK(wa.eps0 * wa.w(X.id) <= wa.w(c));
        CHECK(3 * wa.w(c) <= wa.w(X.id));
      }
    }
  }
}

TEST_CASE("smaller eps0 is accepted, larger is rejected") {
  auto D = build("segment@2048", 0.125, 2);
  const int K = D->neighbor_stats().K;
  CHECK(default_eps0(K) == Rational(1, 3 * K));
  WeightAssignment small = assign_weights(*D, Rational(1, 6 * K));
  CHECK(verify_weight_bounds(*D, small).ok());
  try {
    assign_weights(*D, Rational(1, 3 * K - 1));
    FAIL("expected Eps0OutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Eps0OutOfRange);
  }
  CHECK_THROWS_AS(assign_weights(*D, Rational(0)), Error);
  CHECK_THROWS_AS(default_eps0(0), Error);
}

TEST_CASE("chain length rejects mixed levels") {
  auto D = build("segment@2048", 0.125, 2);
  WeightAssignment wa = assign_weights(*D, default_eps0(D->neighbor_stats().K));
  Chain c = D->simple_chain({0}, {1}, 1);
  c.tiles.push_back(D->level_tiles(2).front());
  CHECK_THROWS_AS(chain_length_w(c, wa, *D), Error);
}
