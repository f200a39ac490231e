#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "specshift/io.hpp"

using namespace specshift;

namespace {

const char* kBinary = "./specshift";

int run(const std::string& args) {
  int status = std::system((std::string(kBinary) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// rows keyed by the t column
std::map<std::string, std::vector<double>> parse_csv(const std::string& text) {
  std::map<std::string, std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    std::string key = cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    rows[key] = vals;
  }
  return rows;
}

}  // namespace

TEST_CASE("cli binary is present") {
  REQUIRE_MESSAGE(std::filesystem::exists(kBinary),
                  "expected the specshift binary next to the test runner");
  CHECK(run("--help") == 0);
}

TEST_CASE("compute on the scalar pair") {
  TempDir d("cli_tmp_compute");
  write_file(d.file("h0.json"), R"({"dim":1,"re":[[0]]})");
  write_file(d.file("v.json"), R"({"dim":1,"re":[[1]]})");
  int code = run("compute -p 3 --h0 " + d.file("h0.json") + " --v " + d.file("v.json") +
                 " --grid -0.5:1.5:9 --format csv --out " + d.file("out"));
  REQUIRE(code == 0);

  auto rows = parse_csv(read_file(d.file("out/samples.csv")));
  // eta_2 = 1 - t on [0,1), eta_3 = (1-t)^2/2
  CHECK(rows.at("0.25")[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rows.at("0.5")[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rows.at("0.75")[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rows.at("-0.5")[1] == 0.0);
  CHECK(rows.at("1.5")[1] == 0.0);
  CHECK(rows.at("0.5")[2] == doctest::Approx(0.125).epsilon(1e-11));
  CHECK(rows.at("0.5")[0] == doctest::Approx(1.0).epsilon(1e-12));  // xi

  nlohmann::json j = nlohmann::json::parse(read_file(d.file("out/densities.json")));
  REQUIRE(j["densities"].size() == 3);
  CHECK(j["densities"][1]["mass"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(j["densities"][1]["mass_target"].get<double>() == doctest::Approx(0.5));

  // the exact representation reproduces the samples
  PiecewisePolynomial eta2 =
      parse_piecewise_json(j["densities"][1]["density"].dump());
  for (const auto& [t, vals] : rows)
    CHECK(eta2(std::stod(t)) == doctest::Approx(vals[1]).epsilon(1e-12));
}

TEST_CASE("compute is deterministic") {
  TempDir d("cli_tmp_det");
  write_file(d.file("h0.json"), R"({"dim":2,"re":[[0,0],[0,1]]})");
  write_file(d.file("v.json"), R"({"dim":2,"re":[[1,2],[2,3]]})");
  std::string common = "compute -p 2 --h0 " + d.file("h0.json") + " --v " +
                       d.file("v.json") + " --grid -4:6:21 --format csv --out ";
  REQUIRE(run(common + d.file("a")) == 0);
  REQUIRE(run(common + d.file("b")) == 0);
  CHECK(read_file(d.file("a/samples.csv")) == read_file(d.file("b/samples.csv")));
  CHECK(read_file(d.file("a/densities.json")) == read_file(d.file("b/densities.json")));
}

TEST_CASE("verify runs a small ensemble clean") {
  TempDir d("cli_tmp_verify");
  REQUIRE(run("verify --random 2 3 --out " + d.path.string()) == 0);
  nlohmann::json j = nlohmann::json::parse(read_file(d.file("report.json")));
  CHECK(j["failed"].get<int>() == 0);
  CHECK(j["passed"].get<int>() > 0);
}

TEST_CASE("non-Hermitian input exits with the validation code") {
  TempDir d("cli_tmp_bad");
  write_file(d.file("h0.json"), R"({"dim":1,"re":[[0]]})");
  write_file(d.file("bad.json"), R"({"dim":2,"re":[[0,1],[0,0]]})");
  CHECK(run("verify --h0 " + d.file("h0.json") + " --v " + d.file("bad.json") +
            " --out " + d.path.string()) == 2);
  CHECK(run("compute --h0 " + d.file("bad.json") + " --v " + d.file("h0.json")) == 2);
}

TEST_CASE("spline subcommand") {
  TempDir d("cli_tmp_spline");
  REQUIRE(run("spline --nodes 0 1 3 --kind basic --out " + d.path.string()) == 0);
  std::string csv = read_file(d.file("spline.csv"));
  auto pos = csv.find("# integral,");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(csv.substr(pos + 11)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(csv.find("# piecewise,") != std::string::npos);

  REQUIRE(run("spline --nodes 2 2 2 --kind cumulative --grid 1:3:5 --out " +
              d.path.string()) == 0);
  auto rows = parse_csv(read_file(d.file("spline.csv")));
  CHECK(rows.at("1.5")[0] == 1.0);
  CHECK(rows.at("2.5")[0] == 0.0);

  CHECK(run("spline --kind basic") == 2);  // --nodes required
}
