#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "sahr/cli.hpp"
#include "sahr/io.hpp"
#include "sahr/report.hpp"

using namespace sahr;

namespace {

const std::string data = SAHR_DATA_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sahr-cli-" + name)).string();
}

}  // namespace

TEST_CASE("partition of the cluster example") {
  auto r = run({"partition", "--rel", data + "/unit-interval.rel", "--points", data + "/clusters.pts", "--epsilon",
                "1/2", "--seed", "7"});
  REQUIRE(r.code == 0);
  auto rep = parse_report(r.out);
  CHECK(rep["kind"] == "partition");
  CHECK(rep["partition"]["bad_mass"] == "0/1");

  // Same argv, same bytes.
  CHECK(run({"partition", "--rel", data + "/unit-interval.rel", "--points", data + "/clusters.pts", "--epsilon",
             "1/2", "--seed", "7"})
            .out == r.out);

  // The brute-force oracle agrees with the emitted report.
  std::string path = temp("partition.json");
  REQUIRE(run({"partition", "--rel", data + "/unit-interval.rel", "--points", data + "/clusters.pts", "--epsilon",
               "1/2", "--mode", "product", "--out", path})
              .code == 0);
  auto o = run({"oracle", "--check", "mass", "--rel", data + "/unit-interval.rel", "--points",
                data + "/clusters.pts", "--partition", path});
  REQUIRE(o.code == 0);
  auto orep = parse_report(o.out);
  CHECK(orep["result"]["pass"] == true);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(run({"density", "--rel", data + "/missing.rel", "--points", data + "/clusters.pts"}).code == 2);
  auto e = run({"density", "--rel", data + "/empty.rel", "--points", data + "/one-to-ten.pts", "--epsilon", "1/10"});
  CHECK(e.code == 1);
  CHECK(parse_report(e.err)["error"] == "InsufficientDensity");
  CHECK(run({"partition", "--rel", data + "/unit-interval.rel", "--points", data + "/clusters.pts", "--epsilon",
             "3/2"})
            .code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("density, lift and cut") {
  auto d = run({"density", "--rel", data + "/sum-at-least-11.rel", "--points", data + "/one-to-ten.pts", "--epsilon",
                "1/2", "--seed", "3"});
  REQUIRE(d.code == 0);
  auto rep = parse_report(d.out);
  CHECK(rep["complete"] == true);
  CHECK(rep["witness"]["density"] == "11/20");

  auto l = run({"lift", "--rel", data + "/unit-interval.rel", "--points", data + "/clusters.pts"});
  REQUIRE(l.code == 0);
  auto lrep = parse_report(l.out);
  CHECK(lrep["m"] == 2);
  CHECK(lrep["sign_mismatches"] == 0);

  auto c = run({"cut", "--rel", data + "/unit-interval.rel", "--points", data + "/path.pts", "--r", "4", "--seed",
                "2"});
  REQUIRE(c.code == 0);
  CHECK(parse_report(c.out)["verification"]["pass"] == true);
}

TEST_CASE("applications") {
  auto t = run({"tverberg", "--points", data + "/tverberg-line.pts", "--seed", "1"});
  REQUIRE(t.code == 0);
  auto rep = parse_report(t.out);
  CHECK(rep["witness"]["q"][0] == "9/2");
  CHECK(rep["witness"]["containment_count"] == 16);

  auto s = run({"same-type", "--points", data + "/plane-parts.pts", "--seed", "2"});
  REQUIRE(s.code == 0);
  CHECK(parse_report(s.out)["witness"]["subsets"].size() == 3);

  auto o = run({"oracle", "--check", "containment", "--points", data + "/tverberg-line.pts", "--q", "9/2"});
  REQUIRE(o.code == 0);
  CHECK(parse_report(o.out)["result"]["values"]["count"] == "16");
}

TEST_CASE("property testing") {
  std::string summary = temp("summary.json");
  auto t = run({"test-property", "--rel", data + "/unit-interval.rel", "--points", data + "/path.pts", "--plugin",
                "triangle-free", "--epsilon", "1/10", "--trials", "5", "--seed", "4", "--summary", summary});
  REQUIRE(t.code == 0);
  auto rep = parse_report(t.out);
  CHECK(rep["outcomes"].size() == 5);
  CHECK(rep["summary"]["rate"] == "1/1");
  auto sum = parse_report(read_text_file(summary));
  CHECK(sum["summary"]["accepted"] == 5);
  std::filesystem::remove(summary);

  auto strict = run({"test-property", "--rel", data + "/unit-interval.rel", "--points", data + "/path.pts",
                     "--plugin", "triangle-free", "--no-clamp"});
  CHECK(strict.code == 2);

  auto f = run({"oracle", "--check", "forbidden", "--rel", data + "/unit-interval.rel", "--points",
                data + "/path.pts", "--plugin", "triangle-free"});
  REQUIRE(f.code == 0);
  CHECK(parse_report(f.out)["result"]["pass"] == true);
}
