#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = liouville::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const std::string& s) { return nlohmann::json::parse(s); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("classify a superlinear power") {
  Run r = run({"classify", "--g", "zeta^2", "--m", "2", "--n", "3"});
  REQUIRE(r.code == 0);
  auto j = parse(r.out);
  CHECK(j["outcome"] == "OnlyTrivialSolutions");
  CHECK(j["config-echo"]["g"] == "zeta^2");
  CHECK(j["evidence"].contains("t211"));
}

TEST_CASE("inconclusive exits with 2") {
  Run r = run({"classify", "--g", "zeta*ln(2+zeta)^lambda", "--param", "lambda=1", "--m", "2"});
  CHECK(r.code == 2);
  CHECK(parse(r.out)["outcome"] == "Inconclusive");
}

TEST_CASE("syntax errors exit with 1 and name the offset") {
  Run r = run({"classify", "--g", "zeta^"});
  CHECK(r.code == 1);
  CHECK(r.err.find("offset 5") != std::string::npos);
  CHECK(run({"classify", "--m", "0"}).code == 1);
  CHECK(run({"no-such-command"}).code == 1);
}

TEST_CASE("mean bound") {
  Run r = run({"bound", "--g", "zeta^3", "--m", "2", "--r", "10"});
  REQUIRE(r.code == 0);
  CHECK(parse(r.out)["bound"].get<double>() == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(run({"bound", "--g", "zeta^3"}).code == 1);
}

TEST_CASE("sweeps keep input order and are deterministic") {
  std::vector<std::string> args = {"simulate", "--g", "zeta^2", "--r-max", "20", "--sweep", "u0=4,1,2", "--jobs", "3"};
  Run a = run(args);
  Run b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto j = parse(a.out);
  REQUIRE(j["results"].size() == 3);
  CHECK(j["results"][0]["values"]["u0"] == "4");
  CHECK(j["results"][1]["values"]["u0"] == "1");
  CHECK(j["results"][2]["values"]["u0"] == "2");
  double r4 = j["results"][0]["result"]["profile"]["blowup_radius"].get<double>();
  double r1 = j["results"][1]["result"]["profile"]["blowup_radius"].get<double>();
  CHECK(r4 < r1);
}

TEST_CASE("output files get a metadata sidecar") {
  auto dir = std::filesystem::temp_directory_path() / "liouville_cli_test";
  std::filesystem::create_directories(dir);
  auto out = dir / "profile.csv";
  Run r = run({"simulate", "--g", "zeta^2", "--u0", "1", "--r-max", "10", "--format", "csv", "--out", out.string()});
  REQUIRE(r.code == 0);
  std::string csv = slurp(out);
  CHECK(csv.rfind("r,u\n", 0) == 0);
  auto meta = parse(slurp(out.string() + ".meta.json"));
  CHECK(meta.contains("timestamp"));
  CHECK(meta["profile"]["status"] == "BlowUp");
  CHECK(meta["config-echo"]["command"] == "simulate");
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify-example and harness commands") {
  Run v = run({"verify-example", "--m", "2", "--n", "3", "--nu", "2", "--c0", "1"});
  REQUIRE(v.code == 0);
  CHECK(parse(v.out)["pass"] == true);

  Run h = run({"harness", "--lemma", "34"});
  REQUIRE(h.code == 0);
  auto j = parse(h.out);
  CHECK(j["lemma"] == "34");
  CHECK(j["empirical_constant"].get<double>() > 0);

  for (const char* lemma : {"31", "33", "35"}) {
    Run k = run({"harness", "--lemma", lemma, "--g", "zeta^2", "--u0", "1", "--r-max", "20"});
    CHECK(k.code == 0);
    CHECK(parse(k.out)["pass"] == true);
  }
  CHECK(run({"harness", "--lemma", "32"}).code == 1);
}

TEST_CASE("g-table as csv") {
  Run r = run({"g-table", "--g", "zeta^2", "--t-min", "1", "--t-max", "100", "--count", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 4);
}

TEST_CASE("sweeping nu binds the exponent in g") {
  Run r = run({"classify", "--g", "zeta*ln(2+zeta)^nu", "--m", "2", "--n", "3", "--sweep", "nu=1,3", "--format", "csv"});
  CHECK(r.code == 2);
  CHECK(r.out == "nu,outcome,t211,t221,t231\n1,Inconclusive,Diverged,violated,Diverged\n"
                 "3,OnlyTrivialSolutions,Converged,satisfied,Diverged\n");
}
