#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#ifndef PNL_CLI_PATH
#error "PNL_CLI_PATH must point at the built command line binary"
#endif

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(PNL_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tempPath(const std::string& stem) {
  return std::string("/tmp/pnl_cli_test_") + stem;
}

TEST_CASE("dataset generation emits a report and a csv file") {
  const std::string out = tempPath("gen.csv");
  const RunResult r =
      run("gen --kind uniform --n 60 --seed 3 --out " + out);
  REQUIRE(r.exit_code == 0);
  const json report = json::parse(r.out);
  CHECK(report["command"] == "gen");
  CHECK(report["seed"] == 3);
  CHECK(report["config"]["n"] == 60);
  CHECK(report["results"]["rows"] == 60);
  CHECK(report.contains("wall_time"));
  std::ifstream csv(out);
  CHECK(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x1,x2");
}

TEST_CASE("counterexample generation carries the latent columns") {
  const std::string out = tempPath("gen2.csv");
  const RunResult r =
      run("gen --situation ii --n 40 --seed 1 --out " + out);
  REQUIRE(r.exit_code == 0);
  std::ifstream csv(out);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x1,x2,t1,e2,z2,e1");
}

TEST_CASE("usage errors exit with code two") {
  CHECK(run("gen --no-such-flag").exit_code == 2);
  CHECK(run("").exit_code == 2);
  CHECK(run("fit-pair").exit_code == 2);  // missing required --data
  CHECK(run("gen --situation ii --kind uniform --n 10 --out /tmp/x").exit_code ==
        2);
  CHECK(run("gen --kind uniform --n 10").exit_code == 2);  // missing --out
}

TEST_CASE("runtime failures exit with code one and a json error") {
  const RunResult r = run("fit-pair --data /nonexistent.csv");
  CHECK(r.exit_code == 1);
  const json e = json::parse(r.out);
  REQUIRE(e.contains("error"));
  CHECK(e["error"]["type"] == "model");
  CHECK_FALSE(e["error"]["message"].get<std::string>().empty());
}

TEST_CASE("reports are reproducible apart from the wall clock") {
  const std::string args = "verify-theorem1 --situation ii --grid 40";
  json a = json::parse(run(args).out);
  json b = json::parse(run(args).out);
  a.erase("wall_time");
  b.erase("wall_time");
  CHECK(a.dump() == b.dump());
  CHECK(a["results"]["max_eq4"].get<double>() < 1e-12);
  CHECK(a["results"]["max_eq5"].get<double>() < 1e-12);
}

TEST_CASE("smooth-construction verification includes the solver residual") {
  const json r = json::parse(
      run("verify-theorem1 --situation v --grid 30").out);
  CHECK(r["results"]["ode_consistency"].get<double>() < 1e-6);
  CHECK(r["results"]["max_eq4"].get<double>() < 1e-8);
}

TEST_CASE("independence testing runs on generated files") {
  const std::string out = tempPath("hsic.csv");
  REQUIRE(run("gen --kind chain3 --n 300 --seed 2 --out " + out).exit_code ==
          0);
  const json r =
      json::parse(run("hsic --data " + out + " --split 1 --seed 5").out);
  CHECK(r["results"]["independent"] == false);
  CHECK(r["results"]["n"] == 300);
  CHECK(r["config"]["split"] == 1);
}

TEST_CASE("config files supply defaults but flags win") {
  const std::string cfg = tempPath("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"seed": 9, "alpha": 0.01})";
  }
  const std::string data = tempPath("cfgdata.csv");
  REQUIRE(run("gen --kind uniform --n 64 --seed 1 --out " + data).exit_code ==
          0);
  const json a = json::parse(
      run("hsic --data " + data + " --split 1 --config " + cfg).out);
  CHECK(a["seed"] == 9);
  CHECK(a["results"]["alpha"] == 0.01);
  const json b = json::parse(run("hsic --data " + data + " --split 1 --config " +
                                 cfg + " --alpha 0.2")
                                 .out);
  CHECK(b["seed"] == 9);
  CHECK(b["results"]["alpha"] == 0.2);
}

TEST_CASE("density classification reads a spec file") {
  const std::string spec = tempPath("dens.json");
  {
    std::ofstream f(spec);
    f << R"({"family":"gaussian","params":{"mean":0.5,"stdev":2.0}})";
  }
  const json r = json::parse(run("classify-density --density " + spec).out);
  CHECK(r["results"]["family"] == "gaussian");
  CHECK(r["results"]["mean"].get<double>() == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r["results"]["std"].get<double>() == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("dag fitting over csv data selects a model") {
  const std::string data = tempPath("dag.csv");
  REQUIRE(run("gen --kind chain3 --n 150 --seed 4 --out " + data).exit_code ==
          0);
  const std::string dag = tempPath("dag.json");
  {
    std::ofstream f(dag);
    f << R"({"n":3,"directed":[[0,1],[1,2]]})";
  }
  const json one = json::parse(
      run("fit-dag --data " + data + " --dag " + dag +
          " --iters 150 --restarts 1 --seed 2")
          .out);
  CHECK(one["results"]["edge_count"] == 2);
  CHECK(one["results"]["variables"].size() == 3);

  const std::string cpdag = tempPath("cpdag.json");
  {
    std::ofstream f(cpdag);
    f << R"({"n":3,"directed":[],"undirected":[[0,1],[1,2]]})";
  }
  const json ext = json::parse(
      run("fit-dag --data " + data + " --cpdag " + cpdag +
          " --iters 150 --restarts 1 --seed 2")
          .out);
  CHECK(ext["results"]["candidates"] == 3);
  CHECK(ext["results"]["reports"].size() == 3);

  CHECK(run("fit-dag --data " + data + " --dag " + dag + " --all").exit_code ==
        2);
  CHECK(run("fit-dag --data " + data).exit_code == 2);
}

}  // namespace
