#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "carto/arg.hpp"
#include "carto/model.hpp"
#include "carto/serialize.hpp"
#include "oracles.hpp"

using namespace carto;

namespace {

constexpr auto R = PrimitiveKind::rectangle;
constexpr auto C = PrimitiveKind::circle;
constexpr auto S = PrimitiveKind::segment;

Arg path(std::vector<PrimitiveKind> kinds) {
  Arg g(kinds);
  for (int v = 0; v + 1 < static_cast<int>(kinds.size()); ++v) g.set_edge(v, v + 1, ConnectionKind::end_to_end, Direction::E);
  return g;
}

Point2 polar(double r, double bearing) { return {r * std::cos(bearing), -r * std::sin(bearing)}; }

std::vector<Primitive> bridge(bool ramp) {
  std::vector<Primitive> p{RectanglePrimitive{{-40, 0}, 30, 10, 0}, RectanglePrimitive{{0, 0}, 50, 12, 0},
                           RectanglePrimitive{{40, 0}, 30, 10, 0}};
  if (ramp) {
    const double b = std::numbers::pi / 3;
    const Point2 foot{40, -5}, off = polar(10, b);
    p.push_back(RectanglePrimitive{{foot.x + off.x, foot.y + off.y}, 20, 8, b});
  }
  return p;
}

std::vector<int> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("direction bins") {
  CHECK(direction_between({0, 0}, {10, 0}) == Direction::E);
  CHECK(direction_between({0, 0}, {-10, 0}) == Direction::E);
  CHECK(direction_between({0, 0}, {10, -10}) == Direction::NE);
  CHECK(direction_between({0, 0}, {0, 10}) == Direction::N);
  CHECK(direction_between({0, 0}, {10, 10}) == Direction::SE);
  CHECK(direction_between({0, 0}, {10, -3}) == Direction::E);
  CHECK(direction_between({0, 0}, {10, 3}) == Direction::E);
}

TEST_CASE("graph edges are canonical and replaceable") {
  Arg g({R, C, S});
  g.set_edge(2, 0, ConnectionKind::overlap, Direction::N);
  g.set_edge(0, 2, ConnectionKind::end_to_side, Direction::E);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0] == ArgEdge{0, 2, ConnectionKind::end_to_side, Direction::E});
  CHECK(g.edge(2, 0).has_value());
  CHECK_FALSE(g.edge(0, 1).has_value());
  CHECK_THROWS_AS(g.set_edge(1, 1, ConnectionKind::overlap, Direction::E), Error);
  CHECK_THROWS_AS(g.set_edge(0, 3, ConnectionKind::overlap, Direction::E), Error);
}

TEST_CASE("two touching collinear segments") {
  const auto g = build_arg({SegmentPrimitive{{0, 0}, {10, 0}}, SegmentPrimitive{{10, 0}, {20, 0}}});
  CHECK(g.vertex_count() == 2);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0] == ArgEdge{0, 1, ConnectionKind::end_to_end, Direction::E});
}

TEST_CASE("distant primitives stay unconnected") {
  const auto g = build_arg({CirclePrimitive{{0, 0}, 5}, RectanglePrimitive{{100, 0}, 20, 8, 0}, SegmentPrimitive{{0, 50}, {10, 60}}});
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("roundabout star has four distinct direction bins") {
  std::vector<Primitive> p{CirclePrimitive{{0, 0}, 20}};
  for (int k = 0; k < 4; ++k) {
    const double b = k * std::numbers::pi / 4;
    p.push_back(SegmentPrimitive{polar(20, b), polar(50, b)});
  }
  const auto g = build_arg(p);
  REQUIRE(g.edge_count() == 4);
  std::vector<Direction> dirs;
  for (const auto& e : g.edges()) {
    CHECK(e.from == 0);
    CHECK(e.conn == ConnectionKind::end_to_side);
    dirs.push_back(e.dir);
  }
  CHECK(dirs == std::vector<Direction>{Direction::E, Direction::NE, Direction::N, Direction::SE});
}

TEST_CASE("bridge with ramp connects end to side") {
  const auto g = build_arg(bridge(true));
  REQUIRE(g.edge_count() == 3);
  CHECK(g.edge(0, 1)->conn == ConnectionKind::end_to_end);
  CHECK(g.edge(1, 2)->conn == ConnectionKind::end_to_end);
  CHECK(g.edge(2, 3)->conn == ConnectionKind::end_to_side);
  CHECK(g.edge(2, 3)->dir == Direction::N);
  const Primitive a = RectanglePrimitive{{0, 0}, 30, 10, 0}, b = RectanglePrimitive{{0, 0}, 30, 10, std::numbers::pi / 2};
  CHECK(build_arg({a, b}).edges()[0].conn == ConnectionKind::overlap);
}

TEST_CASE("common subgraph examples") {
  const auto abc = path({R, C, S});
  CHECK(max_common_subgraph(abc, abc).graph == abc);
  CHECK(max_common_subgraph(path({R, R}), path({C, S, C})).graph.vertex_count() == 0);
  const auto abd = path({R, C, R});
  const auto m = max_common_subgraph(abc, abd);
  CHECK(m.graph == path({R, C}));
  CHECK(m.map == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
}

TEST_CASE("common supergraph examples") {
  const auto abc = path({R, C, S});
  CHECK(min_common_supergraph(abc, abc) == abc);
  const auto disjoint = min_common_supergraph(path({R, R}), path({C, S}));
  CHECK(disjoint.vertex_count() == 4);
  CHECK(disjoint.edge_count() == 2);
  const auto abd = path({R, C, R});
  const auto sup = min_common_supergraph(abc, abd);
  CHECK(sup.vertex_count() == 4);
  CHECK(sup.edge_count() == 3);
  CHECK(sup.edge(0, 1).has_value());
  CHECK(sup.edge(1, 2).has_value());
  CHECK(sup.edge(1, 3).has_value());
  CHECK(oracle::brute_subgraph(abc, sup));
  CHECK(oracle::brute_subgraph(abd, sup));
}

TEST_CASE("exhaustive oracle agreement on small random graphs") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g1 = oracle::random_graph(rng, 5, 0.5, 2, 2, 2);
    const auto g2 = oracle::random_graph(rng, 5, 0.5, 2, 2, 2);
    const auto m = max_common_subgraph(g1, g2);
    const auto [nv, ne] = oracle::brute_mcs_size(g1, g2);
    CHECK(static_cast<int>(m.graph.vertex_count()) == nv);
    CHECK(static_cast<int>(m.graph.edge_count()) == ne);
    CHECK(oracle::brute_subgraph(m.graph, g1));
    CHECK(oracle::brute_subgraph(m.graph, g2));
    const auto sup = min_common_supergraph(g1, g2);
    CHECK(sup.vertex_count() == g1.vertex_count() + g2.vertex_count() - m.graph.vertex_count());
    CHECK(oracle::brute_subgraph(g1, sup));
    CHECK(oracle::brute_subgraph(g2, sup));
    CHECK(is_subgraph(g1, g2) == oracle::brute_subgraph(g1, g2));
    CHECK(are_isomorphic(g1, g2) == oracle::brute_isomorphic(g1, g2));
  }
}

TEST_CASE("Bunke distance properties") {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_graph(rng, 5, 0.4, 2, 2, 2);
    const auto b = oracle::random_graph(rng, 5, 0.4, 2, 2, 2);
    const auto c = oracle::random_graph(rng, 5, 0.4, 2, 2, 2);
    const double ab = bunke_distance(a, b), bc = bunke_distance(b, c), ac = bunke_distance(a, c);
    CHECK(bunke_distance(a, a) == 0.0);
    CHECK(ab == doctest::Approx(bunke_distance(b, a)));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ac <= ab + bc + 1e-12);
  }
  CHECK(bunke_distance(Arg{}, Arg{}) == 0.0);
}

TEST_CASE("search budget is enforced") {
  std::mt19937_64 rng(73);
  Arg g1, g2;
  do {
    g1 = oracle::random_graph(rng, 14, 0.5, 1, 3, 4);
    g2 = oracle::random_graph(rng, 14, 0.5, 1, 3, 4);
  } while (g1.vertex_count() < 12 || g2.vertex_count() < 12);
  try {
    max_common_subgraph(g1, g2, 100);
    FAIL("expected the budget to run out");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("prototype grouping") {
  std::mt19937_64 rng(74);
  const auto x = path({R, C, S, R});
  std::vector<Arg> five;
  for (int i = 0; i < 5; ++i) five.push_back(oracle::permuted(x, random_permutation(rng, 4)));
  auto protos = find_prototypes(five, 2);
  REQUIRE(protos.size() == 1);
  CHECK(protos[0].frequency == 5);
  CHECK(protos[0].graph == five[0]);

  const auto y = path({C, C});
  protos = find_prototypes({x, y, x, x}, 2);
  REQUIRE(protos.size() == 1);
  CHECK(protos[0].graph == x);
  protos = find_prototypes({y, x, x, x}, 1);
  REQUIRE(protos.size() == 2);
  CHECK(protos[0].frequency == 3);
  CHECK(protos[1].graph == y);
  CHECK_THROWS_AS(find_prototypes({}), Error);

  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_graph(rng, 6, 0.5);
    const auto p = oracle::permuted(g, random_permutation(rng, g.vertex_count()));
    CHECK(oracle::brute_isomorphic(g, p));
    CHECK(find_prototypes({g, p}).size() == 1);
  }
}

TEST_CASE("model bounds") {
  const auto x = path({R, C, S});
  auto m = generate_model(std::vector<Arg>{x});
  CHECK(m.max_csg == x);
  CHECK(m.min_csg == x);
  m = generate_model(std::vector<Arg>{x, x});
  CHECK(m.max_csg == x);
  CHECK(m.min_csg == x);
  CHECK_THROWS_AS(generate_model(std::vector<Arg>{}), Error);
}

TEST_CASE("bridge corpus model sandwiches its prototypes") {
  const auto plain = build_arg(bridge(false)), ramp = build_arg(bridge(true));
  const auto protos = find_prototypes({plain, ramp, plain, plain, ramp});
  REQUIRE(protos.size() == 2);
  const auto m = generate_model(protos);
  CHECK(m.max_csg.vertex_count() == 3);
  CHECK(m.max_csg.edge_count() == 2);
  CHECK(m.min_csg.vertex_count() == 4);
  CHECK(m.min_csg.edge_count() == 3);
  for (const auto& p : m.prototypes) {
    CHECK(oracle::brute_subgraph(m.max_csg, p.graph));
    CHECK(oracle::brute_subgraph(p.graph, m.min_csg));
  }
}

TEST_CASE("model distance") {
  const auto abc = path({R, C, S});
  const auto m = generate_model(std::vector<Arg>{path({R, C, R})});
  CHECK(model_distance(path({R, C, R}), m) == 0.0);
  CHECK(model_distance(path({S, S}), m) == 1.0);
  CHECK(model_distance(Arg{}, m) == 1.0);
  CHECK(model_distance(abc, m) == doctest::Approx(1.0 / 3.0));
  const auto two = generate_model(std::vector<Arg>{path({S, S}), path({R, C, S})});
  CHECK(model_distance(abc, two) == 0.0);
  // Interval mode against bounds that both contain the input.
  const auto band = generate_model(std::vector<Arg>{path({R, C}), path({R, C, S})});
  const double d = model_distance(abc, band, DistanceMode::interval);
  CHECK(d >= 0.0);
  CHECK(d <= 1.0);
  CHECK(d == doctest::Approx(0.0));
}

TEST_CASE("graph and model JSON round trip") {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_graph(rng, 6, 0.5);
    CHECK(arg_from_json(to_json(g)) == g);
  }
  const auto m = generate_model(find_prototypes({build_arg(bridge(false)), build_arg(bridge(true))}));
  const auto back = model_from_json(to_json(m));
  CHECK(back.max_csg == m.max_csg);
  CHECK(back.min_csg == m.min_csg);
  REQUIRE(back.prototypes.size() == m.prototypes.size());
  CHECK(back.prototypes[1].frequency == m.prototypes[1].frequency);
  CHECK(back.prototypes[1].graph == m.prototypes[1].graph);
}
