#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "mtorus/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  Run r;
  r.code = mtorus::cli::run(args, r.out, r.err);
  return r;
}

std::string strip_runtime(std::string s) {
  auto pos = s.find("runtime_ms");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

TEST_CASE("det klein-bottle emits the schema fields as json") {
  auto r = cli({"det", "klein-bottle", "--a", "6.283185307179586", "--rho", "1",
                "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"quantity\": \"det.klein-bottle\"") != std::string::npos);
  CHECK(r.out.find("\"value\": 2.62854960690089") != std::string::npos);
  CHECK(r.out.find("\"tail_bound\":") != std::string::npos);
  CHECK(r.out.find("\"blocks_used\":") != std::string::npos);
  CHECK(r.out.find("\"runtime_ms\":") != std::string::npos);
}

TEST_CASE("det mapping-torus with identity equals det product") {
  auto torus = cli({"det", "mapping-torus", "--base", "circle", "--isometry",
                    "identity", "--a", "3", "--rho", "0.7", "--format", "json"});
  auto product = cli({"det", "product", "--base", "circle", "--a", "3", "--rho",
                      "0.7", "--format", "json"});
  REQUIRE(torus.code == 0);
  REQUIRE(product.code == 0);
  auto value_of = [](const std::string& s) {
    auto pos = s.find("\"value\": ");
    return s.substr(pos + 9, 17);
  };
  CHECK(value_of(torus.out) == value_of(product.out));
}

TEST_CASE("csv output is bit-identical across runs apart from the runtime") {
  auto first = cli({"det", "t2-phi", "--format", "csv"});
  auto second = cli({"det", "t2-phi", "--format", "csv"});
  REQUIRE(first.code == 0);
  CHECK(strip_runtime(first.out) == strip_runtime(second.out));
  CHECK(first.out.find("det.t2-phi") != std::string::npos);
}

TEST_CASE("invalid geometry exits with code 1 and names the field") {
  auto r = cli({"det", "mapping-torus", "--base", "sphere"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--base") != std::string::npos);
  auto bad = cli({"det", "nonsense"});
  CHECK(bad.code == 1);
  auto negative = cli({"det", "klein-bottle", "--a", "-1"});
  CHECK(negative.code == 1);
  auto bad_degree = cli({"det", "mapping-torus", "--base", "circle",
                         "--isometry", "reflection", "--q", "5"});
  CHECK(bad_degree.code == 1);
}

TEST_CASE("unreachable tolerance exits with the truncation code") {
  auto r = cli({"det", "mapping-torus", "--base", "circle", "--isometry",
                "reflection", "--a", "0.05", "--rho", "1", "--cutoff", "20",
                "--tail-tol", "1e-12"});
  CHECK(r.code == 2);
  CHECK(r.err.find("truncation") != std::string::npos);
}

TEST_CASE("torsion dual pathway reports both values and their difference") {
  auto r = cli({"torsion", "--spec", "klein", "--pathway", "both", "--format",
                "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"value_definition\":") != std::string::npos);
  CHECK(r.out.find("\"difference\":") != std::string::npos);
}

TEST_CASE("torsion of the rotation gluing vanishes") {
  auto r = cli({"torsion", "--spec", "circle-rotation", "--angle", "0.7",
                "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"value\": 0,") != std::string::npos);
}

TEST_CASE("witten torsion through the cli") {
  auto r = cli({"torsion", "--spec", "klein", "--witten", "--t", "1.0",
                "--a", "6.283185307179586", "--format", "json"});
  REQUIRE(r.code == 0);
  // -log((1+e^{-a})/(1-e^{-a})) at a = 2 pi
  CHECK(r.out.find("\"value\": -0.003734889") != std::string::npos);
}

TEST_CASE("heat subcommand evaluates the trace") {
  auto r = cli({"heat", "--spec", "klein", "--t", "0.5", "--a",
                "6.283185307179586", "--rho", "1", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"quantity\": \"heat.klein\"") != std::string::npos);
}

TEST_CASE("config file supplies defaults and flags win") {
  const char* path = "mtorus_test_config.ini";
  {
    std::ofstream config(path);
    config << "[det]\nrho=0.7\na=3\n";
  }
  auto from_config = cli({"det", "klein-bottle", "--config", path});
  auto overridden = cli({"det", "klein-bottle", "--config", path, "--rho", "1",
                         "--a", "6.283185307179586"});
  std::remove(path);
  REQUIRE(from_config.code == 0);
  REQUIRE(overridden.code == 0);
  CHECK(from_config.out.find("1.48255987171728") != std::string::npos);
  CHECK(overridden.out.find("2.62854960690089") != std::string::npos);
}

TEST_CASE("verify subset runs a single calibration check") {
  auto r = cli({"verify", "--only", "calibration"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("calibration") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
  auto unknown = cli({"verify", "--only", "no-such-check"});
  CHECK(unknown.code == 1);
}

TEST_CASE("verify is deterministic for a fixed seed") {
  auto first = cli({"verify", "--only", "dtn-oracle", "--seed", "7", "--format",
                    "json"});
  auto second = cli({"verify", "--only", "dtn-oracle", "--seed", "7", "--format",
                     "json"});
  REQUIRE(first.code == 0);
  auto strip = [](const std::string& s) {
    auto pos = s.find("\"runtime_ms\"");
    return s.substr(0, pos);
  };
  CHECK(strip(first.out) == strip(second.out));
}
