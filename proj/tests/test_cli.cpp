#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "jepq/scalar.hpp"
#include "jepq/verify.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = jepq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("stationary example with exact output") {
  const auto r = run({"stationary", "--m", "2", "--n", "1", "--q", "1/2", "--exact"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  REQUIRE(doc["states"].size() == 2);
  CHECK(doc["states"][0]["state"] == "0");
  CHECK(doc["states"][0]["prob"]["exact"] == "3/4");
  CHECK(doc["states"][1]["state"] == "1");
  CHECK(doc["states"][1]["prob"]["exact"] == "1/4");
  CHECK(doc["states"][1]["prob"]["float"].get<double>() == 0.25);
  CHECK(doc["summary"]["Z"]["exact"] == "2");
}

TEST_CASE("exact strings round-trip through JSON") {
  const auto r = run({"stationary", "--m", "5", "--n", "3", "--q", "2/3"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  jepq::Rational total(0);
  for (const auto& row : doc["states"]) {
    const auto p = jepq::parse_rational(row["prob"]["exact"].get<std::string>());
    CHECK(jepq::to_string(p) == row["prob"]["exact"].get<std::string>());
    CHECK(p.get_d() == row["prob"]["float"].get<double>());
    total += p;
  }
  CHECK(total == 1);
}

TEST_CASE("throw fraction conventions are both labeled") {
  const auto corrected = json::parse(run({"stationary", "--m", "3", "--n", "2", "--q", "1/2"}).out);
  CHECK(corrected["summary"]["throw_fraction"]["exact"] == "12/13");
  CHECK(corrected["summary"]["throw_fraction_paper"]["exact"] == "24/13");
  CHECK(corrected["summary"]["throw_fraction_direct_sum"]["exact"] == "12/13");
  const auto literal =
      json::parse(run({"stationary", "--m", "3", "--n", "2", "--q", "1/2", "--paper-literal"}).out);
  CHECK(literal["summary"]["throw_fraction"]["exact"] == "24/13");
  CHECK(literal["summary"]["throw_fraction_convention"] == "paper-literal");
}

TEST_CASE("uniform and unbounded stationary tables") {
  const auto u = json::parse(run({"stationary", "--m", "3", "--n", "1", "--model", "bounded-uniform"}).out);
  // weights 3, 2, 1
  CHECK(u["states"][0]["prob"]["exact"] == "1/2");
  CHECK(u["states"][2]["prob"]["exact"] == "1/6");
  const auto inf = json::parse(
      run({"stationary", "--m", "4", "--n", "1", "--q", "1/2", "--model", "unbounded-geometric"}).out);
  CHECK(inf["states"][0]["prob"]["exact"] == "1/2");
  CHECK(inf["summary"]["tail_mass"]["exact"] == "1/16");
}

TEST_CASE("verify exits 0 on a correct build") {
  const auto r = run({"verify", "--max-m", "4"});
  CHECK(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["summary"]["all_passed"] == true);
  CHECK(doc["checks"].size() == jepq::run_verification({4, 4}).size());
}

TEST_CASE("converge rows respect the bound chain") {
  const auto r = run({"converge", "--n", "2", "--q", "1/2", "--m-range", "2:14"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 13);
  for (const auto& row : doc["rows"]) {
    CHECK(row["tv"]["float"].get<double>() <= row["bound_exact"]["float"].get<double>());
    CHECK(row["bound_exact"]["float"].get<double>() <= row["bound_simple"]["float"].get<double>());
  }
  const auto exact = json::parse(run({"converge", "--n", "2", "--q", "1/2", "--m-range", "2:6", "--exact"}).out);
  CHECK(doc["rows"][0]["tv"]["exact"].is_null());
  CHECK(exact["rows"][0]["tv"]["exact"].is_string());
}

TEST_CASE("limits, rook and simulate produce reports") {
  const auto lim = json::parse(run({"limits", "--n", "2", "--q", "1/2", "--m-range", "2:30"}).out);
  CHECK(lim["fixed_n"].size() == 29);
  CHECK(lim["growing_n"].size() == 15);
  const auto rook = json::parse(run({"rook", "--m", "6", "--n", "3", "--q", "1/2"}).out);
  CHECK(rook["summary"]["configs"] == 350);
  CHECK(rook["summary"]["match"] == true);
  const auto sim = run({"simulate", "--m", "4", "--n", "2", "--q", "1/2", "--steps", "20000", "--seed", "9"});
  REQUIRE(sim.code == 0);
  const auto doc = json::parse(sim.out);
  CHECK(doc["summary"]["tv_empirical_vs_exact"]["float"].get<double>() < 0.05);
  // same seed, same report
  CHECK(run({"simulate", "--m", "4", "--n", "2", "--q", "1/2", "--steps", "20000", "--seed", "9"}).out == sim.out);
}

TEST_CASE("csv output") {
  const auto r = run({"stationary", "--m", "2", "--n", "1", "--q", "1/2", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "state,weight_exact,weight_float,prob_exact,prob_float");
  std::string first;
  std::getline(in, first);
  CHECK(first == "0,3/2,1.5,3/4,0.75");
}

TEST_CASE("--out writes to a file") {
  const std::string path = "jepq_cli_test_out.json";
  const auto r = run({"rook", "--m", "3", "--n", "1", "--q", "1/2", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto doc = json::parse(in);
  CHECK(doc["command"] == "rook");
  std::remove(path.c_str());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"stationary", "--n", "1", "--q", "1/2"}).code == 2);               // missing --m
  CHECK(run({"stationary", "--m", "2", "--n", "3", "--q", "1/2"}).code == 2);   // n > m
  CHECK(run({"stationary", "--m", "2", "--n", "1", "--q", "3/2"}).code == 2);   // q out of range
  CHECK(run({"stationary", "--m", "2", "--n", "1", "--q", "x"}).code == 2);
  CHECK(run({"converge", "--n", "2", "--q", "1/2", "--m-range", "5"}).code == 2);
  CHECK(run({"stationary", "--m", "2", "--n", "1", "--q", "1/2", "--format", "xml"}).code == 2);
  CHECK(run({"verify", "--max-m", "0"}).code == 2);
  const auto e = run({"stationary", "--m", "2"});
  CHECK(e.code == 2);
  CHECK_FALSE(e.err.empty());
}

TEST_CASE("state cap from the environment") {
  setenv("JEPQ_STATE_CAP", "5", 1);
  CHECK(run({"stationary", "--m", "5", "--n", "2", "--q", "1/2"}).code == 2);
  CHECK(run({"stationary", "--m", "4", "--n", "1", "--q", "1/2"}).code == 0);
  unsetenv("JEPQ_STATE_CAP");
  CHECK(run({"stationary", "--m", "5", "--n", "2", "--q", "1/2"}).code == 0);
}

TEST_CASE("help exits 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("stationary") != std::string::npos);
}
