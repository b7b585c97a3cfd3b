#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "treeunif/error.hpp"

using namespace treeunif;

namespace {

Errc code_of(const TreeSpec& spec) {
  try {
    MetricTree T(spec);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

}  // namespace

TEST_CASE("build normalizes to diameter one") {
  auto T = MetricTree::build(th::segment(2.0, 8));
  CHECK(T->scale() == doctest::Approx(0.5));
  CHECK(T->dd({0}, {1}) == doctest::Approx(1.0));
  CHECK(T->sample_count() == 9);

  auto P = MetricTree::build(th::tripod(1.0));
  CHECK(P->scale() == doctest::Approx(0.5));
  CHECK(P->dd({1}, {2}) == doctest::Approx(1.0));
  CHECK(P->dd({0}, {3}) == doctest::Approx(0.5));
}

TEST_CASE("build rejects malformed trees") {
  TreeSpec cyc;
  cyc.nodes = {"a", "b", "c"};
  cyc.edges = {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
  CHECK(code_of(cyc) == Errc::CycleDetected);

  TreeSpec dis;
  dis.nodes = {"a", "b", "c", "d"};
  dis.edges = {{0, 1, 1}, {2, 3, 1}, {0, 1, 1}};
  Errc c = code_of(dis);
  CHECK((c == Errc::CycleDetected || c == Errc::Disconnected));

  TreeSpec forest;
  forest.nodes = {"a", "b", "c"};
  forest.edges = {{0, 1, 1}};
  CHECK(code_of(forest) == Errc::Disconnected);

  auto neg = th::segment(-1.0);
  CHECK(code_of(neg) == Errc::NonPositiveLength);

  auto snow = th::segment();
  snow.mode = MetricMode::Snowflake;
  snow.epsilon_s = 1.5;
  CHECK(code_of(snow) == Errc::EpsilonOutOfRange);

  auto tab = th::table_path();
  tab.table[0][2] = tab.table[2][0] = NAN;
  CHECK(code_of(tab) == Errc::MissingTableEntry);
}

TEST_CASE("dd on geodesic and snowflake segments") {
  auto T = MetricTree::build(th::segment());
  CHECK(T->dd({0}, {1}) == doctest::Approx(1.0));
  CHECK(T->dd(th::at(*T, 0, 0.25), th::at(*T, 0, 0.5)) == doctest::Approx(0.25));

  auto S = th::segment();
  S.mode = MetricMode::Snowflake;
  S.epsilon_s = 0.5;
  auto Ts = MetricTree::build(S);
  CHECK(Ts->dd(th::at(*Ts, 0, 0.25), th::at(*Ts, 0, 0.5)) == doctest::Approx(0.5));
}

TEST_CASE("table mode 3-point path matches the brute-force oracle") {
  // tests/oracles/frozen.json: table_path
  auto T = MetricTree::build(th::table_path());
  const double ratio = T->dd({0}, {2}) / T->dd({0}, {1});
  CHECK(ratio == doctest::Approx(1.5));
  CHECK(T->arc_diam(T->arc_between({0}, {2})) == doctest::Approx(T->dd({0}, {2})));
  CHECK(T->dd({0}, {2}) == doctest::Approx(1.0));  // normalized by the largest entry
}

TEST_CASE("arcs") {
  auto T = MetricTree::build(th::tripod(1.0, 16));
  Arc a = T->arc_between({1}, {1});
  CHECK(a.degenerate());
  CHECK(T->arc_diam(a) == 0.0);
  Arc b = T->arc_between({1}, {2});
  CHECK(b.trace.front() == PointRef{1});
  CHECK(b.trace.back() == PointRef{2});
  CHECK(std::find(b.trace.begin(), b.trace.end(), PointRef{0}) != b.trace.end());
  CHECK(T->arc_diam(b) == doctest::Approx(1.0));
  for (std::size_t i = 1; i < b.trace.size(); ++i) CHECK(T->dd(b.trace[0], b.trace[i]) >= T->dd(b.trace[0], b.trace[i - 1]));
}

TEST_CASE("branch data") {
  auto T = MetricTree::build(th::segment(1.0, 64));
  BranchData mid = T->branch_data(th::at(*T, 0, 0.5));
  CHECK(mid.kind == PointKind::Double);
  CHECK(mid.D() == doctest::Approx(0.5));
  CHECK(T->branch_data({0}).kind == PointKind::Leaf);
  CHECK(T->branch_points().empty());

  auto P = MetricTree::build(th::tripod());
  BranchData c = P->branch_data({0});
  CHECK(c.kind == PointKind::Branch);
  CHECK(c.H() == doctest::Approx(0.5));
  CHECK(P->branch_points() == std::vector<PointRef>{{0}});

  auto B = MetricTree::build(th::binary(2));
  CHECK(B->branch_points().size() == 3);
}

TEST_CASE("equal diameter cuts") {
  auto T = MetricTree::build(th::segment(1.0, 600));
  auto pieces = T->equal_diameter_split(T->arc_between({0}, {1}), 3);
  REQUIRE(pieces.size() == 3);
  for (const Arc& p : pieces) CHECK(T->arc_diam(p) == doctest::Approx(1.0 / 3).epsilon(0.01));

  auto two = T->equal_diameter_split(T->arc_between({0}, {1}), 2);
  CHECK(T->dd(two[0].second, th::at(*T, 0, 0.5)) <= T->grid_tolerance());

  // tests/oracles/frozen.json: snowflake_split
  auto S = th::segment(1.0, 4096);
  S.mode = MetricMode::Snowflake;
  S.epsilon_s = 0.5;
  auto Ts = MetricTree::build(S);
  auto halves = Ts->equal_diameter_split(Ts->arc_between({0}, {1}), 2);
  CHECK(Ts->arc_diam(halves[0]) == doctest::Approx(0.7071067811865476).epsilon(0.01));
  CHECK(Ts->arc_diam(halves[1]) == doctest::Approx(0.7071067811865476).epsilon(0.01));
}

TEST_CASE("doubling estimate matches the exhaustive packing oracle") {
  // tests/oracles/frozen.json: doubling (segment 5, snowflake 9)
  const std::vector<double> scales{0.5, 0.25, 0.125, 0.0625};
  auto T = MetricTree::build(th::segment(1.0, 512));
  auto seg = T->estimate_doubling(scales, 0.5);
  CHECK(seg.packing == 5);
  CHECK(seg.N <= 5);
  auto S = th::segment(1.0, 512);
  S.mode = MetricMode::Snowflake;
  S.epsilon_s = 0.5;
  auto snow = MetricTree::build(S)->estimate_doubling(scales, 0.5);
  CHECK(snow.packing == 9);
  CHECK(snow.N > seg.N);
  // One scale larger than the diameter: bounded by a 1/2-net of the tree.
  CHECK(T->estimate_doubling({4.0}, 0.5).packing <= 3);
}

TEST_CASE("balls and grid tolerance") {
  auto T = MetricTree::build(th::segment(1.0, 100));
  CHECK(T->grid_tolerance() == doctest::Approx(0.01));
  auto b = T->ball(th::at(*T, 0, 0.5), 0.1 + 1e-9, true);
  CHECK(b.size() == 21);
  CHECK(std::is_sorted(b.begin(), b.end()));
}
