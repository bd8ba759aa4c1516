#include "doctest.h"

#include "rmtdec/cli.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace rmtdec;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rmtdec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("sample writes the requested shape deterministically") {
  const auto p1 = temp("rmtdec_cli_a.csv"), p2 = temp("rmtdec_cli_b.csv");
  const std::vector<std::string> args{"sample", "--kind", "oe", "--family", "gauss", "--n", "4",
                                      "--count", "1000", "--seed", "7", "--out"};
  auto a1 = args, a2 = args;
  a1.push_back(p1.string());
  a2.push_back(p2.string());
  REQUIRE(run(a1).code == 0);
  REQUIRE(run(a2).code == 0);
  const std::string text = slurp(p1);
  CHECK(text == slurp(p2));
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# spec=", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 1000);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("circular angles and MCMC diagnostics") {
  const Run r = run({"sample", "--kind", "cue", "--n", "3", "--count", "50", "--seed", "1"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ls, cell, ',')) {
      const double v = std::stod(cell);
      CHECK((v > -M_PI && v <= M_PI));
      ++cols;
    }
    CHECK(cols == 3);
  }
  const Run m = run({"sample", "--kind", "oe", "--family", "jacobi", "--a", "0.5", "--n", "2", "--count", "200",
                     "--format", "json"});
  REQUIRE(m.code == 0);
  CHECK(m.err.find("acceptance=") != std::string::npos);
  std::istringstream jin(m.out);
  std::getline(jin, line);
  CHECK(nlohmann::json::parse(line)["width"] == 2);
}

TEST_CASE("gap command") {
  SUBCASE("unitary exact") {
    const Run r = run({"gap", "--kind", "ue", "--family", "gauss", "--n", "1", "--interval", "-1", "1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["E"][0].get<double>() == doctest::Approx(1.0 - std::erf(1.0)).epsilon(1e-12));
    CHECK(j["E"][1].get<double>() == doctest::Approx(std::erf(1.0)).epsilon(1e-12));
  }
  SUBCASE("odd orthogonal exact") {
    const Run r = run({"gap", "--kind", "oe", "--family", "gauss", "--n", "3", "--s", "1.0"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["engine"] == "exact");
    CHECK(j["E"].size() == 4);
    double total = 0.0;
    for (const auto& v : j["E"]) total += v.get<double>();
    CHECK(std::abs(total - 1.0) < 1e-8);
  }
  SUBCASE("even order falls back to Monte Carlo") {
    const Run r = run({"gap", "--kind", "oe", "--family", "gauss", "--n", "4", "--s", "1.0", "--count", "2000"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["engine"] == "monte_carlo");
    CHECK(j.contains("stderr"));
  }
}

TEST_CASE("verify command and exit codes") {
  const auto report = temp("rmtdec_cli_report.json");
  const Run r = run({"verify", "recurrence", "--family", "jacobi", "--a", "0.5", "--json", report.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS recurrence") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["pass"] == true);
  std::filesystem::remove(report);

  CHECK(run({"verify", "nonsense"}).code == 2);
  CHECK(run({"sample", "--kind", "oe", "--family", "bogus"}).code == 2);
  CHECK(run({"sample", "--kind", "oe", "--n", "0", "--count", "0"}).code == 2);
  CHECK(run({"sample", "--kind", "oe", "--n", "2", "--bad-flag"}).code == 2);
  CHECK(run({"gap", "--kind", "ue", "--family", "cauchy", "--a", "0.1", "--n", "4", "--s", "1"}).code == 3);
}

TEST_CASE("config file supplies defaults that flags override") {
  const auto cfg = temp("rmtdec_cli.ini");
  {
    std::ofstream f(cfg);
    f << "kind = ue\nfamily = gauss\nn = 1\n";
  }
  const Run a = run({"gap", "--config", cfg.string(), "--interval", "-1", "1"});
  REQUIRE(a.code == 0);
  CHECK(nlohmann::json::parse(a.out)["spec"] == "ue(n=1,gauss)");
  const Run b = run({"gap", "--config", cfg.string(), "--n", "2", "--interval", "-1", "1"});
  REQUIRE(b.code == 0);
  CHECK(nlohmann::json::parse(b.out)["spec"] == "ue(n=2,gauss)");
  std::filesystem::remove(cfg);
}

TEST_CASE("installed binary runs") {
  const char* exe = std::getenv("RMTDEC_CLI");
  if (!exe) return;
  const std::string cmd = std::string(exe) + " gap --kind cue --n 2 --theta 3.2 > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(exe) + " sample --kind nope > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
