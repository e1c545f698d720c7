#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>

#include "sahr/error.hpp"
#include "sahr/regularity.hpp"

using namespace sahr;

namespace {

// |x - y| <= 1 on the line.
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

PointConfig line(std::initializer_list<Rational> xs) {
  std::vector<Point> pts;
  for (const auto& x : xs) pts.push_back({x});
  return make_config(pts);
}

PointConfig three_clusters() {
  return line({Rational(0), frac(1, 10), frac(2, 10), Rational(5), frac(51, 10), frac(52, 10), Rational(10),
               frac(101, 10), frac(102, 10)});
}

// Independent recount: bad mass over increasing distinct-class pairs.
Rational recount(const RelationSpec& rel, const PointConfig& P, const PartitionReport& rep) {
  std::uint64_t bad = 0;
  for (std::size_t a = 0; a < rep.classes.size(); ++a)
    for (std::size_t b = a + 1; b < rep.classes.size(); ++b) {
      bool e = false, ne = false;
      for (std::size_t i : rep.classes[a])
        for (std::size_t j : rep.classes[b]) {
          std::vector<Point> t{P.points[i], P.points[j]};
          (eval_relation(rel, t) ? e : ne) = true;
        }
      if (e && ne) bad += rep.classes[a].size() * rep.classes[b].size();
    }
  Rational n2(static_cast<long>(P.points.size() * P.points.size()));
  return Rational(static_cast<long>(bad)) / n2;
}

bool is_partition(const PartitionReport& rep, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& c : rep.classes)
    for (std::size_t i : c) seen[i]++;
  for (int s : seen)
    if (s != 1) return false;
  return true;
}

}  // namespace

TEST_CASE("homogeneous box polarity") {
  auto P = line({Rational(1), Rational(2), Rational(3)});
  std::vector<PointConfig> parts{P, P};
  auto c = homogeneous_box(parts, complete_relation(2, 1), 1);
  CHECK(c.polarity == Polarity::Complete);
  auto e = homogeneous_box(parts, empty_relation(2, 1), 1);
  CHECK(e.polarity == Polarity::Empty);

  // Two far clusters: the unit-interval graph across them is empty.
  auto A = line({Rational(0), frac(1, 2)}), B = line({Rational(10), frac(21, 2)});
  std::vector<PointConfig> far{A, B};
  auto w = homogeneous_box(far, unit_interval(), 3);
  CHECK(w.polarity == Polarity::Empty);
  CHECK(w.sizes[0] >= 1);
  CHECK(w.sizes[1] >= 1);
}

TEST_CASE("partition of three clusters") {
  auto P = three_clusters();
  auto rel = unit_interval();
  auto rep = partition_product(P, rel, frac(1, 2), 7);
  CHECK(is_partition(rep, P.size()));
  CHECK(rep.bad_mass == 0);
  CHECK(recount(rel, P, rep) == rep.bad_mass);
  CHECK(rep.K >= 2);

  auto eq = equitable_partition(P, rel, frac(1, 2), 7);
  CHECK(eq.equitable);
  CHECK(is_partition(eq, P.size()));
  CHECK(eq.bad_mass < frac(1, 2));
  CHECK(recount(rel, P, eq) == eq.bad_mass);
}

TEST_CASE("trivial relations give one class") {
  auto P = three_clusters();
  for (const auto& rel : {complete_relation(2, 1), empty_relation(2, 1)}) {
    auto rep = partition_product(P, rel, frac(1, 2), 1);
    CHECK(rep.K == 1);
    CHECK(rep.bad_mass == 0);
  }
  auto eq = equitable_partition(P, complete_relation(2, 1), frac(1, 4), 1);
  CHECK(eq.bad_mass == 0);
  auto one = equitable_partition(line({Rational(3)}), unit_interval(), frac(1, 4), 1);
  CHECK(one.K == 1);
}

TEST_CASE("random unit-interval instance") {
  std::mt19937_64 rng(11);
  std::vector<Point> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({frac(static_cast<long>(rng() % 600), 100)});
  auto P = make_config(pts);
  auto rel = unit_interval();
  for (auto eps : {frac(2, 5), frac(1, 5)}) {
    auto rep = equitable_partition(P, rel, eps, 5);
    CHECK(rep.equitable);
    CHECK(is_partition(rep, P.size()));
    CHECK(rep.bad_mass <= eps);
    CHECK(recount(rel, P, rep) == rep.bad_mass);
  }
}

TEST_CASE("complete partite subsets") {
  auto rel = unit_interval();
  auto clique = line({Rational(0), frac(1, 10), frac(2, 10), frac(3, 10)});
  auto c = complete_partite_subsets(clique, rel, 3, 1);
  CHECK(c.subsets.size() == 3);
  CHECK(c.polarity == Polarity::Complete);

  auto sparse = line({Rational(0), Rational(5), Rational(10), Rational(15)});
  auto e = complete_partite_subsets(sparse, rel, 3, 1);
  CHECK(e.polarity == Polarity::Empty);

  auto two = line({Rational(0), frac(1, 10), frac(2, 10), Rational(5), frac(51, 10), frac(52, 10)});
  auto t = complete_partite_subsets(two, rel, 2, 1);
  REQUIRE(t.subsets.size() == 2);
  CHECK(t.subsets[0].size() == t.subsets[1].size());
  std::vector<std::vector<std::size_t>> sides{t.subsets[0], t.subsets[1]};
  CHECK(classify_product(rel, two, sides) ==
        (t.polarity == Polarity::Complete ? Homogeneity::Complete : Homogeneity::Empty));

  // Asymmetric relation is rejected.
  RelationSpec lt;
  lt.arity = 2;
  lt.dim = 1;
  lt.polys = {Polynomial::variable(2, 1) - Polynomial::variable(2, 0)};
  lt.declared_t = 1;
  lt.declared_D = 1;
  CHECK_THROWS_AS(complete_partite_subsets(two, lt, 2, 1), Error);
}

TEST_CASE("strong partition of a cluster graph") {
  std::vector<Point> pts;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 10; ++i) pts.push_back({Rational(5 * c) + frac(i, 20)});
  auto P = make_config(pts);
  auto rel = unit_interval();
  auto s = strong_partition_graph(P, rel, frac(3, 10), frac(1, 10), 9);
  CHECK(s.q_sets.size() == s.partition.K);
  for (std::size_t i = 0; i < s.q_sets.size(); ++i) {
    CHECK_FALSE(s.q_sets[i].empty());
    CHECK((s.q_density[i] <= frac(1, 10) || s.q_density[i] >= frac(9, 10)));
    for (std::size_t j = i + 1; j < s.q_sets.size(); ++j) {
      std::vector<std::vector<std::size_t>> sides{s.q_sets[i], s.q_sets[j]};
      CHECK(classify_product(rel, P, sides) != Homogeneity::Mixed);
    }
  }
  CHECK(s.delta > 0);
}

TEST_CASE("strong partition of a 3-uniform cluster system") {
  // Edge iff all three points lie within distance 1 of each other pairwise:
  // (1 - (x-y)^2 >= 0) and (1 - (y-z)^2 >= 0) and (1 - (x-z)^2 >= 0).
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
  std::vector<Point> pts;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 4; ++i) pts.push_back({Rational(5 * c) + frac(i, 10)});
  auto P = make_config(pts);
  auto s = strong_partition_hypergraph(P, rel, frac(2, 5), 3);
  auto tuples = increasing_subsets(s.q_sets.size(), 3);
  for (const auto& t : tuples) {
    std::vector<std::vector<std::size_t>> sides{s.q_sets[t[0]], s.q_sets[t[1]], s.q_sets[t[2]]};
    CHECK(classify_product(rel, P, sides) != Homogeneity::Mixed);
  }
  CHECK(s.partition.equitable);
}
