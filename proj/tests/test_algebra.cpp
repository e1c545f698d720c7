#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "sahr/algebra.hpp"
#include "sahr/error.hpp"

using namespace sahr;

namespace {

Rational q(const char* s) { return parse_rational(s); }

// f = 1 - (x - y)^2 over two blocks of dimension 1.
RelationSpec unit_interval() {
  RelationSpec r;
  r.arity = 2;
  r.dim = 1;
  Polynomial f(2);
  f.add_term({0, 0}, 1);
  f.add_term({2, 0}, -1);
  f.add_term({1, 1}, 2);
  f.add_term({0, 2}, -1);
  r.polys = {f};
  r.declared_t = 1;
  r.declared_D = 2;
  return r;
}

RelationSpec sum_at_least(std::size_t k, long threshold) {
  RelationSpec r;
  r.arity = k;
  r.dim = 1;
  Polynomial f(k);
  f.add_term(Exponent(k, 0), Rational(-threshold));
  for (std::size_t i = 0; i < k; ++i) f += Polynomial::variable(k, i);
  r.polys = {f};
  r.declared_t = 1;
  r.declared_D = 1;
  return r;
}

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("-2.5e-3") == Rational(-1, 400));
  CHECK(parse_rational(" 3/6 ") == Rational(1, 2));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(format_rational(Rational(3)) == "3/1");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(ceil(Rational(7, 2)) == 4);
  CHECK(floor(Rational(-7, 2)) == -4);
}

TEST_CASE("eval_poly") {
  Polynomial p(2);
  p.add_term({1, 0}, 1);
  p.add_term({0, 1}, 1);
  p.add_term({0, 0}, -11);
  std::vector<Rational> x{6, 6};
  CHECK(p.eval(x) == 1);

  Polynomial g = Polynomial::constant(2, 1) - (Polynomial::variable(2, 0) - Polynomial::variable(2, 1)) *
                                                  (Polynomial::variable(2, 0) - Polynomial::variable(2, 1));
  std::vector<Rational> y{0, 1};
  CHECK(g.eval(y) == 0);

  Polynomial det = orientation_polynomial(2);
  std::vector<Rational> tri{0, 0, 1, 0, 0, 1};
  CHECK(det.eval(tri) == 1);

  std::vector<Rational> bad{1};
  CHECK_THROWS_AS(p.eval(bad), Error);
}

TEST_CASE("eval_relation uses closed atoms") {
  auto rel = unit_interval();
  std::vector<Point> a{{0}, {q("0.5")}}, b{{0}, {2}}, c{{0}, {1}};
  CHECK(eval_relation(rel, a));
  CHECK_FALSE(eval_relation(rel, b));
  CHECK(eval_relation(rel, c));
  std::vector<Point> short_tuple{{0}};
  CHECK_THROWS_AS(eval_relation(rel, short_tuple), Error);
}

TEST_CASE("verify_complexity") {
  CHECK(verify_complexity(sum_at_least(2, 11)) == Complexity{1, 1});
  CHECK(verify_complexity(unit_interval()) == Complexity{1, 2});

  RelationSpec det;
  det.arity = 3;
  det.dim = 2;
  det.polys = {orientation_polynomial(2)};
  det.declared_t = 1;
  det.declared_D = 1;
  CHECK(verify_complexity(det).D == 1);

  auto over = unit_interval();
  over.declared_D = 1;
  CHECK_THROWS_AS(verify_complexity(over), Error);
  auto wrong_t = unit_interval();
  wrong_t.declared_t = 2;
  CHECK_THROWS_AS(verify_complexity(wrong_t), Error);
}

TEST_CASE("veronese_dim") {
  CHECK(veronese_dim(1, 1) == 1);
  CHECK(veronese_dim(2, 2) == 5);
  CHECK(veronese_dim(3, 2) == 9);
  for (std::size_t d = 1; d <= 10; ++d) CHECK(veronese_dim(d, 1) == d);
}

TEST_CASE("lift_point") {
  CHECK(lift_point({3, 4}, 1) == Point{3, 4});
  CHECK(lift_point({1, 2}, 2) == Point{1, 2, 1, 2, 4});
  CHECK(lift_point({2}, 3) == Point{2, 4, 8});

  std::mt19937_64 rng(5);
  std::set<Point> seen;
  for (int i = 0; i < 10000; ++i) {
    Point x{frac(static_cast<long>(rng() % 2001) - 1000, 1 + static_cast<long>(rng() % 97)),
            frac(static_cast<long>(rng() % 2001) - 1000, 1 + static_cast<long>(rng() % 97))};
    auto [it, inserted] = seen.insert(lift_point(x, 2));
    (void)it;
    (void)inserted;
  }
  // Distinct inputs give distinct lifts: the first d coordinates are x itself.
  std::set<Point> inputs;
  for (const auto& y : seen) inputs.insert(Point(y.begin(), y.begin() + 2));
  CHECK(inputs.size() == seen.size());
}

TEST_CASE("lift_partial_hyperplanes") {
  Point x3{3};
  const Point* fixed[] = {&x3};
  auto hs = lift_partial_hyperplanes(unit_interval(), fixed, 1);
  REQUIRE(hs.size() == 1);
  CHECK(hs[0].coeffs == std::vector<Rational>{-8, 6, -1});
  CHECK(hs[0].value(lift_point({3}, 2)) == 1);

  Point x5{5};
  const Point* fixed5[] = {&x5};
  auto lin = lift_partial_hyperplanes(sum_at_least(2, 11), fixed5, 1);
  CHECK(lin[0].coeffs == std::vector<Rational>{-6, 1});

  RelationSpec prod;
  prod.arity = 2;
  prod.dim = 1;
  Polynomial xy(2);
  xy.add_term({1, 1}, 1);
  prod.polys = {xy};
  prod.declared_t = 1;
  prod.declared_D = 1;
  Point zero{0};
  const Point* fixed0[] = {&zero};
  auto deg = lift_partial_hyperplanes(prod, fixed0, 1);
  CHECK(deg[0].coeffs == std::vector<Rational>{0, 0});
  CHECK(deg[0].degenerate());
}

TEST_CASE("sign identity on random relations") {
  std::mt19937_64 rng(11);
  auto small = [&] { return frac(static_cast<long>(rng() % 13) - 6, 1 + static_cast<long>(rng() % 4)); };
  int mismatches = 0, probes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t d = 1 + rng() % 3, k = 2 + rng() % 2;
    unsigned D = 1 + rng() % 3;
    RelationSpec rel;
    rel.arity = k;
    rel.dim = d;
    rel.declared_D = D;
    for (int j = 0; j < 2; ++j) {
      Polynomial f(k * d);
      for (int term = 0; term < 5; ++term) {
        Exponent e(k * d, 0);
        for (std::size_t b = 0; b < k; ++b) {
          unsigned budget = static_cast<unsigned>(rng() % (D + 1));
          for (unsigned u = 0; u < budget; ++u) ++e[b * d + rng() % d];
        }
        f.add_term(e, small());
      }
      rel.polys.push_back(f);
    }
    rel.declared_t = 2;
    rel.formula = BooleanFormula::all_of({BooleanFormula::atom(1), BooleanFormula::negation(BooleanFormula::atom(2))});
    std::size_t free = rng() % k;
    PartialLifter lifter(rel, free);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<Point> pts(k, Point(d));
      for (auto& p : pts)
        for (auto& c : p) c = small();
      std::vector<const Point*> fixed, all;
      for (std::size_t b = 0; b < k; ++b) {
        all.push_back(&pts[b]);
        if (b != free) fixed.push_back(&pts[b]);
      }
      auto hs = lifter.hyperplanes(fixed);
      auto y = lift_point(pts[free], D);
      for (std::size_t j = 0; j < 2; ++j) {
        ++probes;
        if (sign(rel.polys[j].eval_blocks(all, d)) != sign(hs[j].value(y))) ++mismatches;
        Polynomial sub = lifter.substitute_lifted(j, y);
        if (sub.eval_blocks(fixed, d) != hs[j].value(y)) ++mismatches;
      }
    }
  }
  CHECK(probes == 20000);
  CHECK(mismatches == 0);
}

TEST_CASE("negate_relation") {
  auto rel = unit_interval();
  auto neg = negate_relation(rel);
  CHECK(neg.formula.to_prefix() == "(not (atom 1))");
  auto back = negate_relation(neg);
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      std::vector<Point> t{{frac(a, 2)}, {frac(b, 2)}};
      CHECK(eval_relation(neg, t) == !eval_relation(rel, t));
      CHECK(eval_relation(back, t) == eval_relation(rel, t));
    }
  auto full = complete_relation(2, 1);
  auto none = negate_relation(full);
  std::vector<Point> t{{1}, {2}};
  CHECK(eval_relation(full, t));
  CHECK_FALSE(eval_relation(none, t));
  CHECK_FALSE(eval_relation(empty_relation(2, 1), t));
}

TEST_CASE("formula invariants") {
  auto rel = unit_interval();
  rel.formula = BooleanFormula::atom(5);
  CHECK_THROWS_AS(validate_relation(rel), Error);
  auto f = BooleanFormula::any_of({BooleanFormula::atom(1), BooleanFormula::atom(3)}).shift_atoms(2);
  CHECK(f.to_prefix() == "(or (atom 3) (atom 5))");
  CHECK(f.max_atom() == 5);
  CHECK(f.min_atom() == 3);
}

TEST_CASE("monomial order") {
  const auto& e = monomial_exponents(2, 2);
  REQUIRE(e.size() == 5);
  CHECK(e[0] == Exponent{1, 0});
  CHECK(e[1] == Exponent{0, 1});
  CHECK(e[2] == Exponent{2, 0});
  CHECK(e[3] == Exponent{1, 1});
  CHECK(e[4] == Exponent{0, 2});
}
