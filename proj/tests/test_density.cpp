#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sahr/density.hpp"
#include "sahr/error.hpp"

using namespace sahr;

namespace {

// sum of the k coordinates >= s, points on the line.
RelationSpec sum_at_least(std::size_t k, long s) {
  RelationSpec r;
  r.arity = k;
  r.dim = 1;
  Polynomial f(k);
  for (std::size_t i = 0; i < k; ++i) f += Polynomial::variable(k, i);
  f += Polynomial::constant(k, Rational(-s));
  r.polys = {f};
  r.formula = BooleanFormula::atom(1);
  r.declared_t = 1;
  r.declared_D = 1;
  return r;
}

PointConfig range(long lo, long hi) {
  std::vector<Point> pts;
  for (long v = lo; v <= hi; ++v) pts.push_back({Rational(v)});
  return make_config(pts);
}

std::size_t oracle_max_biclique_sum(const std::vector<long>& P, const std::vector<long>& Q, long s) {
  // For threshold relations the optimum is a pair of upper sets.
  std::size_t best = 0;
  for (long a : P)
    for (long b : Q) {
      if (a + b < s) continue;
      std::size_t na = 0, nb = 0;
      for (long x : P) na += x >= a;
      for (long y : Q) nb += y >= b;
      best = std::max(best, na * nb);
    }
  return best;
}

}  // namespace

TEST_CASE("theorem bound example") {
  auto b = theorem_bound(2, 1, 1, 1, frac(1, 2));
  REQUIRE(b.size() == 2);
  CHECK(b[0] == frac(1, 16));
  CHECK(b[1] == Rational(1) / Rational(65536));
  auto b3 = theorem_bound(3, 1, 1, 1, Rational(1));
  CHECK(b3.size() == 3);
  CHECK(b3[0] == b3[2]);
  CHECK_THROWS_AS(theorem_bound(2, 1, 1, 1, Rational(0)), Error);
}

TEST_CASE("biclique for p + q >= 11") {
  auto rel = sum_at_least(2, 11);
  auto P = range(1, 10), Q = range(1, 10);
  auto w = find_biclique(P, Q, rel, frac(1, 2), 7);
  CHECK(w.polarity == Polarity::Complete);
  CHECK(w.density == frac(11, 20));
  std::vector<PointConfig> parts{P, Q};
  CHECK(product_is_complete(rel, parts, w.parts));
  CHECK(w.sizes[0] >= w.required[0]);
  CHECK(w.sizes[1] >= w.required[1]);
  std::vector<long> vals{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(oracle_max_biclique_sum(vals, vals, 11) == 30);
  CHECK(w.sizes[0] * w.sizes[1] <= 30);
  for (std::size_t i = 0; i < 2; ++i) CHECK(w.predicates[i].select(parts[i].points) == w.parts[i]);
}

TEST_CASE("exact mode and determinism") {
  auto rel = sum_at_least(2, 11);
  auto P = range(1, 10), Q = range(1, 10);
  DensityOptions opt;
  opt.mode = CuttingMode::Exact;
  auto a = find_biclique(P, Q, rel, frac(1, 2), 3, opt);
  auto b = find_biclique(P, Q, rel, frac(1, 2), 3, opt);
  CHECK(a.parts == b.parts);
  std::vector<PointConfig> parts{P, Q};
  CHECK(product_is_complete(rel, parts, a.parts));
}

TEST_CASE("complete and empty relations") {
  auto P = range(1, 5);
  auto w = find_biclique(P, P, complete_relation(2, 1), Rational(1), 1);
  CHECK(w.sizes[0] >= 1);
  CHECK(w.sizes[1] >= 1);
  CHECK_THROWS_AS(find_biclique(P, P, empty_relation(2, 1), frac(1, 10), 1), Error);
  try {
    find_biclique(P, P, empty_relation(2, 1), frac(1, 10), 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientDensity);
  }
}

TEST_CASE("three parts, sum >= 12") {
  auto rel = sum_at_least(3, 12);
  std::vector<PointConfig> parts{range(1, 6), range(1, 6), range(1, 6)};
  auto w = find_complete_product(parts, rel, frac(1, 10), 11);
  CHECK(product_is_complete(rel, parts, w.parts));
  REQUIRE(w.reduced.size() == 1);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(w.sizes[i] >= 1);
    CHECK(w.predicates[i].select(parts[i].points) == w.parts[i]);
  }
}

TEST_CASE("random circle relation in the plane") {
  // |p - q|^2 <= 2: degree 2, m = 5 after lifting.
  RelationSpec rel;
  rel.arity = 2;
  rel.dim = 2;
  Polynomial f = Polynomial::constant(4, Rational(2));
  for (std::size_t c = 0; c < 2; ++c) {
    Polynomial diff = Polynomial::variable(4, c) - Polynomial::variable(4, 2 + c);
    f -= diff * diff;
  }
  rel.polys = {f};
  rel.declared_t = 1;
  rel.declared_D = 2;
  std::mt19937_64 rng(5);
  std::vector<Point> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({frac(rng() % 9, 4), frac(rng() % 9, 4)});
  auto P = make_config(pts);
  // m = 5 exceeds the supported cutting dimension.
  CHECK_THROWS_AS(find_biclique(P, P, rel, frac(1, 10), 1), Error);
}

TEST_CASE("reduced relation shape") {
  auto rel = sum_at_least(3, 12);
  Simplex cell{1, {{Rational(4)}, {Rational(6)}}, true};
  auto red = derive_reduced_relation(rel, cell, {Rational(5)});
  CHECK(red.arity == 2);
  auto c = verify_complexity(red);
  CHECK(c.t == 3);  // t (1 + l) with l = 2
  CHECK(c.D == 1);
  // Every tuple that is an edge of the reduced relation is an edge with any
  // point whose lift lies inside the cell.
  for (long a = 1; a <= 6; ++a)
    for (long b = 1; b <= 6; ++b) {
      std::vector<Point> t2{{Rational(a)}, {Rational(b)}};
      if (!eval_relation(red, t2)) continue;
      for (Rational y : {Rational(5), frac(9, 2), frac(11, 2)}) {
        std::vector<Point> t3{{Rational(a)}, {Rational(b)}, {y}};
        CHECK(eval_relation(rel, t3));
      }
    }
}

TEST_CASE("lifted simplex predicate matches relative interior") {
  // d = 1, D = 2: phi(x) = (x, x^2).
  Simplex tri{2, {{Rational(0), Rational(-1)}, {Rational(4), Rational(-1)}, {Rational(2), Rational(10)}}, true};
  auto pred = lifted_simplex_predicate(tri, 1, 2);
  for (long n = -8; n <= 40; ++n) {
    Point x{frac(n, 8)};
    CHECK(pred.contains(x) == relative_interior_contains(tri.vertices, lift_point(x, 2)));
  }
  // A segment through phi(1) and phi(3): its relative interior avoids the parabola.
  Simplex seg{2, {lift_point({Rational(1)}, 2), lift_point({Rational(3)}, 2)}, true};
  auto sp = lifted_simplex_predicate(seg, 1, 2);
  for (long n = 0; n <= 32; ++n) CHECK_FALSE(sp.contains({frac(n, 8)}));
  // A single vertex selects exactly its preimage.
  Simplex pt{2, {lift_point({Rational(2)}, 2)}, true};
  auto pp = lifted_simplex_predicate(pt, 1, 2);
  CHECK(pp.contains({Rational(2)}));
  CHECK_FALSE(pp.contains({frac(17, 8)}));
}
