#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sahr/error.hpp"
#include "sahr/oracles.hpp"
#include "sahr/testing.hpp"

using namespace sahr;

namespace {

RelationSpec unit_interval() {
  RelationSpec r;
  r.arity = 2;
  r.dim = 1;
  Polynomial diff = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
  r.polys = {Polynomial::constant(2, Rational(1)) - diff * diff};
  r.declared_t = 1;
  r.declared_D = 2;
  return r;
}

// Pairwise within distance 1.
RelationSpec close_triples() {
  RelationSpec rel;
  rel.arity = 3;
  rel.dim = 1;
  auto v = [](std::size_t i) { return Polynomial::variable(3, i); };
  auto one = Polynomial::constant(3, Rational(1));
  for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
    Polynomial d = v(a) - v(b);
    rel.polys.push_back(one - d * d);
  }
  rel.formula = BooleanFormula::all_of({BooleanFormula::atom(1), BooleanFormula::atom(2), BooleanFormula::atom(3)});
  rel.declared_t = 3;
  rel.declared_D = 2;
  return rel;
}

PointConfig spaced(std::size_t n, Rational step) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({step * Rational(static_cast<long>(i))});
  return make_config(pts);
}

PointConfig clusters(std::size_t count, std::size_t size) {
  std::vector<Point> pts;
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < size; ++i)
      pts.push_back({Rational(static_cast<long>(5 * c)) + frac(static_cast<long>(i), static_cast<long>(4 * size))});
  return make_config(pts);
}

// Edge iff the signs differ: -x*y >= 0 on +-1..+-half.
Instance bipartite(std::size_t half) {
  RelationSpec r;
  r.arity = 2;
  r.dim = 1;
  r.polys = {Polynomial::constant(2, Rational(0)) - Polynomial::variable(2, 0) * Polynomial::variable(2, 1)};
  r.declared_t = 1;
  r.declared_D = 1;
  std::vector<Point> pts;
  for (std::size_t i = 1; i <= half; ++i) {
    pts.push_back({Rational(static_cast<long>(i))});
    pts.push_back({Rational(-static_cast<long>(i))});
  }
  return Instance(make_config(pts), r);
}

}  // namespace

TEST_CASE("vertex sampling") {
  CHECK(sample_vertices(10, 10, 3).size() == 10);
  CHECK(sample_vertices(10, 0, 3).empty());
  CHECK(sample_vertices(50, 7, 9) == sample_vertices(50, 7, 9));
  auto s = sample_vertices(50, 7, 9);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK_THROWS_AS(sample_vertices(5, 6, 1), Error);
}

TEST_CASE("psi values") {
  auto tri = make_plugin("triangle-free");
  for (std::size_t r : {1, 2, 3, 4, 5, 100}) CHECK(tri.psi(r) == 3);
  CHECK(make_plugin("k4-free").psi(3) == 4);

  auto p3 = make_plugin("induced-p3-free");
  CHECK(p3.psi(1) == 1);  // a single vertex R cannot host an induced P3
  CHECK(p3.psi(2) == 3);
  CHECK(p3.psi(50) == 3);

  auto e3 = make_plugin("induced-edge-free");
  CHECK(e3.psi(2) == 1);
  CHECK(e3.psi(3) == 3);
  CHECK(e3.psi(20) == 3);

  auto two = make_plugin("induced-two-edge-free");
  std::size_t last = 0;
  for (std::size_t r = 1; r <= 6; ++r) {
    CHECK(two.psi(r) >= last);
    last = two.psi(r);
  }
  CHECK(two.psi(6) == 4);
  CHECK_THROWS_AS(make_plugin("nope"), Error);
}

TEST_CASE("monotone tester") {
  auto tri = make_plugin("triangle-free");
  TesterConfig cfg;
  Instance path(spaced(120, frac(3, 5)), unit_interval());
  for (std::uint64_t seed = 0; seed < 200; ++seed) CHECK(monotone_tester(path, tri, cfg, seed).accept);

  Instance ball(spaced(60, frac(1, 100)), unit_interval());
  auto o = monotone_tester(ball, tri, cfg, 1);
  CHECK_FALSE(o.accept);
  REQUIRE(o.witness.has_value());
  CHECK(o.clamped);
  CHECK(o.v == 60);
  CHECK(o.v_formula == 8 * 100 * 3);

  TesterConfig small;
  small.r = 1;
  auto s = monotone_tester(ball, tri, small, 2);
  CHECK(s.v == 24);
  CHECK_FALSE(s.clamped);
  CHECK_FALSE(s.accept);

  TesterConfig strict;
  strict.clamp = false;
  CHECK_THROWS_AS(monotone_tester(ball, tri, strict, 1), Error);

  Instance empty(make_config({}), unit_interval());
  CHECK(monotone_tester(empty, tri, cfg, 1).accept);
  CHECK_THROWS_AS(hereditary_graph_tester(path, tri, cfg, 1), Error);
}

TEST_CASE("hereditary graph tester") {
  auto p3 = make_plugin("induced-p3-free");
  TesterConfig cfg;
  Instance cl(clusters(6, 15), unit_interval());
  for (std::uint64_t seed = 0; seed < 200; ++seed) CHECK(hereditary_graph_tester(cl, p3, cfg, seed).accept);

  auto far = bipartite(40);
  TesterConfig two;
  two.r = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto o = hereditary_graph_tester(far, p3, two, seed);
    CHECK(o.v == 36);
    if (!o.accept) {
      REQUIRE(o.witness.has_value());
      std::vector<std::size_t> img = o.witness->image;
      CHECK(img.size() == 3);
    }
  }
  auto est = estimate_acceptance(far, p3, two, 50, 5);
  CHECK(est.rate <= frac(1, 3));
  CHECK(est.half_width > 0);

  Instance one(make_config({{Rational(1)}}), unit_interval());
  CHECK(hereditary_graph_tester(one, p3, cfg, 1).accept);
}

TEST_CASE("hereditary hypergraph tester") {
  auto e3 = make_plugin("induced-edge-free");
  TesterConfig cfg;
  Instance empty(clusters(3, 10), empty_relation(3, 1));
  CHECK(hereditary_hypergraph_tester(empty, e3, cfg, 1).accept);

  Instance dense(clusters(3, 10), close_triples());
  auto o = hereditary_hypergraph_tester(dense, e3, cfg, 1);
  CHECK_FALSE(o.accept);
  CHECK(o.clamped);
  CHECK(o.v_formula == 100 * 100 * 9);

  TesterConfig small;
  small.r = 2;  // psi(2) = 1, so v = 4
  auto s = hereditary_hypergraph_tester(dense, e3, small, 3);
  CHECK(s.v == 4);
}

TEST_CASE("acceptance estimates") {
  auto tri = make_plugin("triangle-free");
  TesterConfig cfg;
  Instance path(spaced(40, frac(3, 5)), unit_interval());
  auto a = estimate_acceptance(path, tri, cfg, 30, 1);
  CHECK(a.rate == 1);
  CHECK(a.accepted == 30);
  Instance ball(spaced(40, frac(1, 100)), unit_interval());
  auto b = estimate_acceptance(ball, tri, cfg, 30, 1);
  CHECK(b.rate == 0);
  CHECK(b.high < frac(1, 3));
  CHECK_THROWS_AS(estimate_acceptance(ball, tri, cfg, 0, 1), Error);
}
