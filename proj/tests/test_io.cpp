#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sahr/error.hpp"
#include "sahr/io.hpp"
#include "sahr/report.hpp"

using namespace sahr;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidSpec;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped unit-interval relation") {
  auto rel = parse_relation_file(SAHR_DATA_DIR "/unit-interval.rel");
  CHECK(verify_complexity(rel) == Complexity{1, 2});
  std::vector<Point> near{{Rational(0)}, {frac(1, 2)}}, far{{Rational(0)}, {Rational(2)}};
  CHECK(eval_relation(rel, near));
  CHECK_FALSE(eval_relation(rel, far));

  auto again = parse_relation(format_relation(rel));
  CHECK(again.polys == rel.polys);
  CHECK(again.formula.to_prefix() == rel.formula.to_prefix());
  CHECK(again.declared_D == rel.declared_D);
}

TEST_CASE("relation diagnostics") {
  const char* bad_exp = "sahr-relation 1\narity 2\ndim 1\npoly [1,0,0] 1\n";
  CHECK(kind_of([&] { parse_relation(bad_exp, "x.rel"); }) == ErrorKind::InvalidSpec);
  CHECK(message_of([&] { parse_relation(bad_exp, "x.rel"); }).find("x.rel:4:6") != std::string::npos);

  const char* junk = "sahr-relation 1\narity 2\ndim 1\npoly [1,a] 1\n";
  CHECK(message_of([&] { parse_relation(junk, "y"); }).find("y:4:") != std::string::npos);

  const char* f5 = "sahr-relation 1\narity 2\ndim 1\npoly [1,0] 1\npoly [0,1] 1\nformula (and 1 (atom 5))\n";
  CHECK(kind_of([&] { parse_relation(f5); }) == ErrorKind::InvalidSpec);

  const char* over = "sahr-relation 1\narity 2\ndim 1\ndegree 1\npoly [2,0] 1\n";
  CHECK(kind_of([&] { parse_relation(over); }) == ErrorKind::InvalidSpec);

  CHECK(kind_of([&] { parse_relation("arity 2\n"); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { parse_relation_file("/nonexistent.rel"); }) == ErrorKind::ParseError);
}

TEST_CASE("formula syntax") {
  const char* text =
      "sahr-relation 1\narity 2\ndim 1\npoly [1,0] 1\npoly [0,1] 1\nformula (or (not 1) (and (atom 1) 2))\n";
  auto rel = parse_relation(text);
  std::vector<Point> a{{Rational(-1)}, {Rational(-1)}}, b{{Rational(1)}, {Rational(-1)}};
  CHECK(eval_relation(rel, a));
  CHECK_FALSE(eval_relation(rel, b));
}

TEST_CASE("points files") {
  auto P = parse_points("1/2, 3\n# comment\n\n0.1, -2.5\n");
  REQUIRE(P.size() == 2);
  CHECK(P.dim == 2);
  CHECK(P.points[0] == Point{frac(1, 2), Rational(3)});
  CHECK(P.points[1] == Point{frac(1, 10), frac(-5, 2)});

  CHECK(kind_of([] { parse_points("1, 2\n3\n"); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { parse_points("1, x\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_points("A: 1\n2\n"); }) == ErrorKind::ParseError);

  auto L = parse_points("A: 1\nB: 2\nA: 3\n");
  auto parts = L.parts();
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].size() == 2);
  CHECK(parse_points(format_points(L)).labels == L.labels);
}

TEST_CASE("report round trip") {
  PartitionReport r;
  r.arity = 2;
  r.classes = {{0, 2}, {1}};
  r.homogeneity = {Homogeneity::Mixed};
  r.bad_mass = frac(2, 9);
  r.product_bad_mass = frac(1, 3);
  r.K = 2;
  Json rep = new_report("partition");
  rep["partition"] = to_json(r);
  std::string text = dump_report(rep);
  Json back = parse_report(text);
  CHECK(dump_report(back) == text);
  auto r2 = partition_from_json(back["partition"]);
  CHECK(r2.classes == r.classes);
  CHECK(r2.bad_mass == r.bad_mass);
  CHECK(r2.homogeneity == r.homogeneity);
  CHECK(back["partition"]["bad_mass"] == "2/9");

  CHECK(rational_from_json(to_json(frac(-7, 3))) == frac(-7, 3));
  CHECK(kind_of([] { parse_report("{\"format\": \"other\"}"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_report("not json"); }) == ErrorKind::ParseError);
}
