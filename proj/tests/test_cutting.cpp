#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sahr/cutting.hpp"
#include "sahr/error.hpp"

using namespace sahr;

namespace {

std::vector<LiftedHyperplane> points_1d(std::initializer_list<long> roots) {
  std::vector<LiftedHyperplane> hs;
  for (long r : roots) hs.push_back({{Rational(-r), Rational(1)}});
  return hs;
}

std::vector<LiftedHyperplane> random_lines(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::vector<LiftedHyperplane> hs;
  for (std::size_t i = 0; i < n; ++i) {
    LiftedHyperplane h;
    h.coeffs.resize(m + 1);
    Rational dot(0);
    Point through(m);
    for (std::size_t k = 0; k < m; ++k) {
      h.coeffs[k + 1] = frac(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 3));
      through[k] = frac(static_cast<long>(rng() % 1000), 100);
      dot += h.coeffs[k + 1] * through[k];
    }
    h.coeffs[0] = -dot;
    hs.push_back(h);
  }
  return hs;
}

std::vector<Point> random_probes(const Box& box, std::size_t count, std::mt19937_64& rng, bool snap) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < count; ++i) {
    Point p(box.m());
    for (std::size_t k = 0; k < box.m(); ++k) {
      Rational t = snap ? frac(static_cast<long>(rng() % 5), 4) : frac(static_cast<long>(rng() % 10001), 10000);
      p[k] = box.lo[k] + t * (box.hi[k] - box.lo[k]);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("m=1 slab example") {
  auto hs = points_1d({1, 2, 3, 4, 5, 6});
  Box box{{0}, {7}};
  auto c = build_cutting(hs, 3, box, 1);
  REQUIRE(c.cells.size() == 3);
  CHECK(c.cells[0].vertices == std::vector<Point>{{0}, {3}});
  CHECK(c.cells[1].vertices == std::vector<Point>{{3}, {6}});
  CHECK(c.cells[2].vertices == std::vector<Point>{{6}, {7}});
  for (const auto& l : c.crossing) CHECK(l.size() <= 2);
  CHECK(c.crossing[0] == std::vector<std::size_t>{0, 1});

  Point two{2}, three{3};
  CHECK(locate(c, two) == 0);
  CHECK(locate(c, three) == 0);
  Point inner{frac(9, 2)};
  CHECK(locate(c, inner) == 1);
  Point outside{8};
  CHECK_THROWS_AS(locate(c, outside), Error);
}

TEST_CASE("empty hyperplane set") {
  Box box{{0}, {1}};
  auto c = build_cutting({}, 5, box, 1);
  REQUIRE(c.cells.size() == 1);
  CHECK(c.crossing[0].empty());
  CHECK(verify_cutting(c, {}, {}).pass);

  Box sq{{0, 0}, {1, 1}};
  auto c2 = build_cutting({}, 5, sq, 1);
  CHECK(c2.cells.size() == 2);
  CHECK(verify_cutting(c2, {}, std::vector<Point>{{frac(1, 2), frac(1, 2)}}).pass);
}

TEST_CASE("m=1 with r=n") {
  std::mt19937_64 rng(2);
  auto hs = random_lines(40, 1, rng);
  Box box{{-1}, {11}};
  auto c = build_cutting(hs, 40, box, 3);
  for (const auto& l : c.crossing) CHECK(l.size() <= 1);
}

TEST_CASE("unsupported dimension") {
  Box box{{0, 0, 0}, {1, 1, 1}};
  try {
    build_cutting({}, 2, box, 1);
    FAIL("expected UnsupportedDimension");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedDimension);
  }
}

TEST_CASE("cutting contract on random instances") {
  std::mt19937_64 rng(8);
  for (std::size_t m : {1u, 2u})
    for (std::size_t n : {50u, 200u})
      for (std::size_t r : {2u, 4u, 8u, 16u}) {
        auto hs = random_lines(n, m, rng);
        Box box = m == 1 ? Box{{-1}, {11}} : Box{{-1, -1}, {11, 11}};
        auto c = build_cutting(hs, r, box, 100 + r);
        auto probes = random_probes(box, 300, rng, false);
        auto snapped = random_probes(box, 100, rng, true);
        probes.insert(probes.end(), snapped.begin(), snapped.end());
        auto rep = verify_cutting(c, hs, probes);
        INFO("m=" << m << " n=" << n << " r=" << r);
        CHECK(rep.pass);
        CHECK(rep.max_crossing <= (n + r - 1) / r);
        for (const auto& p : probes) CHECK(closure_contains(c.cells[locate(c, p)], p));
      }
}

TEST_CASE("exact mode crosses nothing") {
  std::mt19937_64 rng(12);
  auto hs = random_lines(15, 2, rng);
  Box box{{-1, -1}, {11, 11}};
  auto c = build_cutting(hs, 4, box, 1, CuttingMode::Exact);
  for (const auto& l : c.crossing) CHECK(l.empty());
  CHECK(verify_cutting(c, hs, random_probes(box, 200, rng, true)).pass);
}

TEST_CASE("determinism") {
  std::mt19937_64 rng(5);
  auto hs = random_lines(100, 2, rng);
  Box box{{-1, -1}, {11, 11}};
  auto a = build_cutting(hs, 4, box, 77), b = build_cutting(hs, 4, box, 77);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].vertices == b.cells[i].vertices);
    CHECK(a.crossing[i] == b.crossing[i]);
  }
}

TEST_CASE("verify_cutting catches a truncated list") {
  std::mt19937_64 rng(6);
  auto hs = random_lines(60, 2, rng);
  Box box{{-1, -1}, {11, 11}};
  auto c = build_cutting(hs, 4, box, 9);
  std::size_t victim = 0;
  while (victim < c.crossing.size() && c.crossing[victim].empty()) ++victim;
  REQUIRE(victim < c.crossing.size());
  c.crossing[victim].pop_back();
  auto rep = verify_cutting(c, hs, {});
  CHECK_FALSE(rep.pass);
  REQUIRE_FALSE(rep.failures.empty());
  CHECK(rep.failures.front().find("cell " + std::to_string(victim)) != std::string::npos);
}
