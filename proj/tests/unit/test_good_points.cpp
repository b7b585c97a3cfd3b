#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "treeunif/error.hpp"
#include "treeunif/good_points.hpp"

using namespace treeunif;

TEST_CASE("constants from the quoted formulas") {
  ConstantsBundle c = derive_constants_from(2, 1);
  CHECK(c.sigma == Rational(1, 36));
  CHECK(c.gamma == Rational(1, 2592));
  CHECK(c.beta == 12);
  CHECK(c.delta == c.gamma / 72);
  CHECK(to_fraction_string(c.delta) == "1/186624");  // tests/oracles/frozen.json: constants
  CHECK(c.provenance.at("delta") == Provenance::PaperFormula);

  ConstantsBundle d = derive_constants(2);
  CHECK(d.Nprime == 16);
  CHECK(d.M == 10);
  CHECK(d.provenance.at("N") == Provenance::Measured);
  CHECK_THROWS_AS(derive_constants(0), Error);
}

TEST_CASE("avoiding sub-arc on the unit segment") {
  auto T = MetricTree::build(th::segment(1.0, 600));
  Arc J = T->arc_between({0}, {1});
  SUBCASE("empty A, M = 1") {
    Arc I = find_avoiding_subarc(*T, J, J, {}, 1);
    CHECK(T->arc_diam(I) == doctest::Approx(1.0 / 6).epsilon(0.02));
    AvoidanceCheck chk = check_avoiding_subarc(*T, J, I, {}, 1);
    CHECK(chk.ok);
  }
  SUBCASE("A = midpoint, M = 1") {
    // tests/oracles/frozen.json: avoiding_subarc (two feasible placements)
    std::vector<PointRef> A{th::at(*T, 0, 0.5)};
    Arc I = find_avoiding_subarc(*T, J, J, A, 1);
    AvoidanceCheck chk = check_avoiding_subarc(*T, J, I, A, 1);
    CHECK(chk.ok);
    CHECK(chk.diam == doctest::Approx(1.0 / 6).epsilon(0.02));
    CHECK(chk.distance >= 1.0 / 6 - T->grid_tolerance());
  }
  SUBCASE("M spread points") {
    const int M = 3;
    std::vector<PointRef> A{th::at(*T, 0, 0.2), th::at(*T, 0, 0.5), th::at(*T, 0, 0.8)};
    Arc I = find_avoiding_subarc(*T, J, J, A, M);
    AvoidanceCheck chk = check_avoiding_subarc(*T, J, I, A, M);
    CHECK(chk.ok);
    double brute = 1e9;
    for (PointRef p : I.trace)
      for (PointRef a : {A[0], A[1], A[2], PointRef{0}, PointRef{1}}) brute = std::min(brute, T->dd(p, a));
    CHECK(brute == doctest::Approx(chk.distance));
    CHECK(brute >= T->arc_diam(J) / (6 * M) - T->grid_tolerance());
  }
}

TEST_CASE("place in the sun") {
  auto T = MetricTree::build(th::segment(1.0, 2048));
  Arc J = T->arc_between({0}, {1});
  SUBCASE("empty shadow returns the midpoint") {
    SunResult r = place_in_sun(*T, {J, {}}, 1);
    CHECK(r.x == J.trace[J.trace.size() / 2]);
  }
  SUBCASE("endpoint shadows, M = 2") {
    ShadowFunction S{J, {{PointRef{0}, 1.0}, {PointRef{1}, 1.0}}};
    SunResult r = place_in_sun(*T, S, 2);
    CHECK(r.sigma == doctest::Approx(1.0 / 144));  // tests/oracles/frozen.json: sun
    CHECK(T->dd(r.x, {0}) >= 1.0 / 144);
    CHECK(T->dd(r.x, {1}) >= 1.0 / 144);
  }
  SUBCASE("single interior shadow, M = 1") {
    PointRef p = th::at(*T, 0, 0.5);
    ShadowFunction S{J, {{p, 1.0}}};
    SunResult r = place_in_sun(*T, S, 1);
    CHECK(r.sigma == doctest::Approx(1.0 / 36));
    CHECK(T->dd(r.x, p) >= 1.0 / 36);
  }
}

TEST_CASE("shadow count bound") {
  auto T = MetricTree::build(th::segment(1.0, 200));
  Arc J = T->arc_between({0}, {1});
  ShadowFunction S{J, {{PointRef{0}, 1.0}, {PointRef{1}, 1.0}}};
  CHECK(shadow_count_bound(*T, S) == 2);
  ShadowFunction Z{J, {}};
  CHECK(shadow_count_bound(*T, Z) == 0);
}

TEST_CASE("good double points") {
  auto T = MetricTree::build(th::segment(1.0, 200));
  GoodPointParams p{1.0, 0.5, 0.4};
  CHECK(is_good_double_point(*T, th::at(*T, 0, 0.5), p).good);
  GoodVerdict near_leaf = is_good_double_point(*T, th::at(*T, 0, 0.05), p);
  CHECK_FALSE(near_leaf.good);
  CHECK(near_leaf.violation == Violation::DoubleDelta);
  CHECK(near_leaf.value == doctest::Approx(0.05));

  auto P = MetricTree::build(th::tripod());
  CHECK(is_good_double_point(*P, {0}, p).violation == Violation::NotDouble);
}

TEST_CASE("good double point on an arc") {
  auto P = MetricTree::build(th::tripod(1.0, 256));
  const double gamma = 0.25;
  Arc leg = P->arc_between({0}, {1});
  const double Delta = P->arc_diam(leg);
  ArcPointResult r = good_double_point_on_arc(*P, leg, Delta, gamma);
  const double H = P->branch_data({0}).H();
  CHECK(P->dd(r.x, {0}) >= gamma * std::min(H, Delta) - P->grid_tolerance());

  auto B = MetricTree::build(th::binary(3, 256));
  // Spine from the top leaf down to a deepest leaf.
  PointRef bottom{static_cast<std::uint32_t>(B->node_count() - 1)};
  Arc spine = B->arc_between({0}, bottom);
  ArcPointResult s = good_double_point_on_arc(*B, spine, 0.2, gamma);
  CHECK(B->degree(s.x) == 2);
  for (const auto& b : branch_sizes(*B)) CHECK(B->dd(s.x, b.b) >= gamma * std::min(b.H, 0.2) - B->grid_tolerance());
}

TEST_CASE("maximal good set on the unit segment") {
  // tests/oracles/frozen.json: segment_good_set, V = {0.3, 0.6}, components <= 0.4
  auto T = MetricTree::build(th::segment(1.0, 1000));
  GoodPointParams p{1.0, 0.5, 0.3};
  auto V = maximal_good_set(*T, p, {});
  REQUIRE(V.size() == 2);
  std::vector<double> xs;
  for (PointRef v : V) xs.push_back(T->dd({0}, v));
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == doctest::Approx(0.3));
  CHECK(xs[1] == doctest::Approx(0.6));
  auto comps = complement_diameters(*T, V);
  CHECK(*std::max_element(comps.begin(), comps.end()) == doctest::Approx(0.4));
  CHECK(*std::max_element(comps.begin(), comps.end()) <= 0.9);

  PointRef seed = th::at(*T, 0, 0.45);
  auto W = maximal_good_set(*T, p, {seed});
  CHECK(std::find(W.begin(), W.end(), seed) != W.end());
}
