#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "commands.hpp"

using namespace lrmipt;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
  fs::path dir() const { return out.substr(0, out.find(' ')); }
  std::string hash() const {
    const auto a = out.find(' ') + 1;
    return out.substr(a, 40);
  }
};

Result call(std::vector<std::string> args, const fs::path& root) {
  args.push_back("--output-dir");
  args.push_back(root.string());
  std::ostringstream o, e;
  Result r;
  r.code = cli::run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

Result call_raw(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  Result r;
  r.code = cli::run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lrmipt_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(call_raw({}).code == 2);
  CHECK(call_raw({"--help"}).code == 0);
  CHECK(call_raw({"no-such-command"}).code == 2);
  CHECK(call_raw({"code", "-L", "10"}).code == 2);
  const auto root = fresh("usage");
  CHECK(call({"entropy-fit", "--delta", "1"}, root).code == 2);
  CHECK(call({"entropy-fit", "--sizes", "1,4"}, root).code == 2);
  CHECK(call({"entropy-fit", "--L", "32", "--sizes", "4,12"}, root).code == 2);
  CHECK(call({"couplings", "--alpha", "0.4"}, root).code == 2);
  CHECK(call({"mc", "--N", "4", "--L", "4", "--gamma", "1", "--sizes", "1"}, root).code == 4);
  CHECK(call({"mc", "--dt", "0.5", "--gamma", "1", "--sizes", "1"}, root).code == 2);
  CHECK_FALSE(fs::exists(root));
}

TEST_CASE("phase diagram") {
  const auto root = fresh("phase");
  const auto r = call({"phase-diagram", "--alpha", "0.4,2", "--gamma", "0.05,1", "--g", "1"}, root);
  REQUIRE(r.code == 0);
  const auto rows = csv(r.dir() / "phase_diagram.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "alpha");
  CHECK(rows[1][9] == "divergent");
  CHECK(rows[2][9] == "divergent");
  CHECK(rows[3][2] == "broken");
  CHECK(rows[4][2] == "symmetric");
  const auto gc = csv(r.dir() / "gamma_c.csv");
  const double zeta4 = std::pow(std::numbers::pi, 4) / 90.0;
  CHECK(std::stod(gc[2][1]) == doctest::Approx((1.0 + 2.0 * zeta4) / 9.0).epsilon(1e-13));
  CHECK(gc[1][2] == "divergent");
  const auto m = json::parse(slurp(r.dir() / "manifest.json"));
  CHECK(m["command"] == "phase-diagram");
  CHECK(m["parameters"]["g"] == 1.0);
  fs::remove_all(root);
}

TEST_CASE("couplings and json format") {
  const auto root = fresh("couplings");
  const auto r = call({"couplings", "--form", "nearest-neighbor", "--g", "0.25", "--L", "64", "--format", "json"}, root);
  REQUIRE(r.code == 0);
  const auto t = json::parse(slurp(r.dir() / "couplings.json"));
  CHECK(t["columns"][1] == "J_eff");
  CHECK(t["rows"][0][1].get<double>() == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-10));
  fs::remove_all(root);
}

TEST_CASE("entropy fit") {
  const auto root = fresh("entropy");
  const auto r = call({"entropy-fit", "--delta", "-1", "--b", "0.05", "--alpha", "2", "--L", "64", "--dt", "0.25",
                       "--sizes", "4,8,12,16", "--snapshot", "8"},
                      root);
  REQUIRE(r.code == 0);
  const auto m = json::parse(slurp(r.dir() / "manifest.json"));
  CHECK(m["summary"]["phase"] == "symmetric");
  CHECK(m["summary"]["relative_spread"].get<double>() < 0.02);
  CHECK(m["summary"]["unconverged"] == 0);
  const auto field = csv(r.dir() / "field_A8.csv");
  CHECK(field.size() == 65);
  fs::remove_all(root);
}

TEST_CASE("syk report") {
  const auto root = fresh("syk");
  const double jhat = std::numbers::pi * std::numbers::pi / 6.0;
  const auto r = call({"syk", "--gamma", std::to_string(0.6 * jhat), "--curve-points", "11"}, root);
  REQUIRE(r.code == 0);
  const auto rep = json::parse(slurp(r.dir() / "report.json"));
  CHECK(rep["lambda"].get<double>() == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(rep["order"] == "second");
  CHECK(rep["entropy_form"] == "power");
  CHECK(csv(r.dir() / "lambda_curve.csv").size() == 12);
  fs::remove_all(root);
}

TEST_CASE("code summary") {
  const auto root = fresh("code");
  const auto r = call({"code", "--alpha", "0.75", "--sigma", "0.5", "--L", "1024"}, root);
  REQUIRE(r.code == 0);
  const auto s = json::parse(slurp(r.dir() / "summary.json"));
  CHECK(s["A_star"].get<double>() == doctest::Approx(std::sqrt(1024.0) / 1.0).epsilon(1e-12));
  CHECK(s["z"].get<double>() == doctest::Approx(0.25));
  CHECK(csv(r.dir() / "code_table.csv").size() == 66);
  fs::remove_all(root);
}

TEST_CASE("monte carlo runs") {
  const auto root = fresh("mc");
  const std::vector<std::string> args = {"mc", "--N", "2", "--L", "3", "--gamma", "0,1,2.5,5,10", "--T", "0.2",
                                         "--trajectories", "40", "--sizes", "1,3", "--seed", "4"};
  const auto a = call(args, root);
  REQUIRE(a.code == 0);
  const auto m = json::parse(slurp(a.dir() / "manifest.json"));
  CHECK(m["summary"]["monotone_trend"]["1"] == true);
  CHECK(m["summary"]["exploratory"] == true);
  CHECK_FALSE(m["parameters"].contains("threads"));
  for (const auto& row : csv(a.dir() / "reference_consistency.csv"))
    if (row[0] != "gamma") CHECK(std::abs(std::stod(row[3])) < 1e-10);

  // same seed: same bytes, same directory, nothing rewritten
  auto again_args = args;
  again_args.insert(again_args.end(), {"--threads", "3"});
  const auto b = call(again_args, root);
  CHECK(b.code == 0);
  CHECK(b.hash() == a.hash());
  CHECK(b.out.find("(existing)") != std::string::npos);
  const auto other = fresh("mc_other");
  const auto c = call(args, other);
  CHECK(c.hash() == a.hash());
  CHECK(slurp(c.dir() / "entropy.csv") == slurp(a.dir() / "entropy.csv"));
  fs::remove_all(root);
  fs::remove_all(other);
}
