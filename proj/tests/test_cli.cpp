/*
   Copyright 2026 The levyfn Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "levyfn/cli.hpp"

using namespace levyfn;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "levyfn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("levyfn_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("classify") {
  Run r = cli({"classify", "--model", "stable15.json", "--theta", "1.0"});
  REQUIRE(r.code == kExitOk);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["extinction_possible"] == true);
  CHECK(j["explosion_possible"] == false);
  CHECK(j["hit_prob"] == 1.0);
  CHECK(j["manifest"]["model_hash"].get<std::string>().size() == 16);

  r = cli({"classify", "--model", "bmdrift.json", "--theta", "1.0"});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["explosion_possible"] == false);

  r = cli({"classify", "--model", "stable15.json", "--theta", "1.5"});
  REQUIRE(r.code == kExitOk);
  j = nlohmann::json::parse(r.out);
  CHECK(j["extinguishing_possible"] == true);
  CHECK(j["extinction_test"]["verdict"] == "Diverges");

  // Pure and deterministic.
  CHECK(cli({"classify", "--model", "tempered", "--theta", "0.7"}).out ==
        cli({"classify", "--model", "tempered", "--theta", "0.7"}).out);
}

TEST_CASE("configuration errors exit 1") {
  CHECK(cli({"classify", "--model", "nope.json"}).code == kExitConfig);
  CHECK(cli({"classify", "--model", R"({"drift": -1, "gaussian": 0})"}).code == kExitConfig);
  CHECK(cli({"classify", "--model", "stable15", "--theta", "-1"}).code == kExitConfig);
  CHECK(cli({"scale", "--model", "bmup", "--min", "-1"}).code == kExitConfig);
  CHECK(cli({"simulate", "--model", "bmup", "--paths", "10"}).code == kExitConfig);
  CHECK(cli({"simulate", "--model", "bmup", "--estimator", "median"}).code == kExitConfig);
  CHECK(cli({"frobnicate"}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("scale table") {
  Run r = cli({"scale", "--model", "stable15", "--min", "1", "--max", "1", "--count", "1"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "x,W,W_closed_form,rel_err");
  CHECK(row.rfind("1,1.1283791", 0) == 0);
  const double rel = std::stod(row.substr(row.rfind(',') + 1));
  CHECK(rel <= 1e-4);

  r = cli({"scale-table", "--model", "bmup", "--min", "1", "--max", "1", "--count", "1"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("\n1,0.632120558") != std::string::npos);

  r = cli({"scale", "--model", "tempered", "--linear", "--min", "0", "--max", "2", "--count", "3"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("\n0,0,,\n") != std::string::npos);
}

TEST_CASE("simulate writes reproducible outputs and never clobbers") {
  const fs::path a = fresh_dir("a"), b = fresh_dir("b");
  const std::vector<std::string> base = {"simulate", "--model", "bmdrift", "--paths", "500", "--barrier", "8",
                                         "--estimator", "hitprob"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  REQUIRE(cli(with({"--seed", "9", "--out", a.string()})).code == kExitOk);
  ::setenv("LEVYFN_SEED", "9", 1);
  REQUIRE(cli(with({"--out", b.string()})).code == kExitOk);
  ::unsetenv("LEVYFN_SEED");
  for (const char* f : {"paths.csv", "summary.json", "manifest.json"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "paths.csv").rfind("path_id,status,zeta,A_final,T_boundary\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(summary["n_paths"] == 500);
  CHECK(std::abs(summary["estimate"].get<double>() - 0.3679) < 0.1);
  const auto man = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(man["seed"] == 9);
  CHECK(man["flags"]["paths"] == 500);

  CHECK(cli(with({"--seed", "9", "--out", a.string()})).code == kExitConfig);
  CHECK(cli(with({"--seed", "10", "--out", a.string(), "--force"})).code == kExitOk);
  CHECK(slurp(a / "paths.csv") != slurp(b / "paths.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("simulate mean passage and all-censored runs") {
  Run r = cli({"simulate", "--model", "bmup", "--estimator", "meanpassage", "--f", "const", "--paths", "2000"});
  REQUIRE(r.code == kExitOk);
  const auto pos = r.out.find("#   \"estimate\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 16)) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(cli({"simulate", "--model", "bmup", "--x", "5", "--horizon", "0.01", "--paths", "100"}).code == kExitConfig);
}

TEST_CASE("verify") {
  const fs::path d = fresh_dir("verify");
  Run r = cli({"verify", "--suite", "analytic", "--out", d.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("[PASS] 1.") != std::string::npos);
  CHECK(fs::exists(d / "verify.txt"));
  CHECK(fs::exists(d / "manifest.json"));
  CHECK(cli({"verify", "--suite", "analytic", "--tol", "0"}).code == kExitVerifyFailed);
  fs::remove_all(d);
}
