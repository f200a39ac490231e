#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specshift/cauchy.hpp"
#include "specshift/divdiff.hpp"
#include "specshift/io.hpp"
#include "specshift/ssf_engine.hpp"
#include "specshift/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCheckFailure = 3;
constexpr int kExitCapacity = 4;

struct GridSpec {
  double min = 0.0, max = 0.0;
  int count = 0;
  bool set = false;
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  double mn, mx;
  int n;
  char tail;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &mn, &mx, &n, &tail) != 3)
    throw specshift::validation_error("--grid expects MIN:MAX:N");
  g.min = mn;
  g.max = mx;
  g.count = n;
  g.set = true;
  return g;
}

std::map<std::string, double> parse_tols(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0)
      throw specshift::validation_error("--tol expects NAME=VALUE");
    out[it.substr(0, eq)] = std::stod(it.substr(eq + 1));
  }
  return out;
}

std::string out_path(const std::string& dir, const std::string& file) {
  if (dir.empty()) return file;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

int run_compute(const std::string& h0_path, const std::string& v_path, int order,
                const GridSpec& grid, const std::string& out_dir,
                const std::string& format) {
  using namespace specshift;
  HermitianOperator H0 = load_matrix(h0_path);
  HermitianOperator V = load_matrix(v_path);
  TaylorContext ctx(H0, V);
  std::vector<SSFDensity> family = ssf_family(ctx, order);

  nlohmann::json j;
  j["order"] = order;
  nlohmann::json densities = nlohmann::json::array();
  Matrix P = Matrix::Identity(V.dim(), V.dim());
  for (int p = 1; p <= order; ++p) {
    P = P * V.matrix();
    const SSFDensity& S = family[static_cast<std::size_t>(p) - 1];
    nlohmann::json d;
    d["order"] = p;
    d["density"] = nlohmann::json::parse(piecewise_to_json(S.density));
    d["mass"] = S.mass;
    d["mass_target"] = P.trace().real() / factorial(p);
    densities.push_back(std::move(d));
  }
  j["densities"] = std::move(densities);
  std::string exact = j.dump(2) + "\n";

  if (format == "json" || !grid.set) {
    write_file(out_path(out_dir, "densities.json"), exact);
  }
  if (grid.set) {
    std::vector<double> g = make_grid(grid.min, grid.max, grid.count);
    std::vector<std::string> names;
    std::vector<const PiecewisePolynomial*> funcs;
    for (int p = 1; p <= order; ++p) {
      names.push_back("eta_" + std::to_string(p));
      funcs.push_back(&family[static_cast<std::size_t>(p) - 1].density);
    }
    write_file(out_path(out_dir, "samples.csv"), sample_csv(g, names, funcs));
    if (format == "csv") write_file(out_path(out_dir, "densities.json"), exact);
  }
  return kExitOk;
}

int run_verify(const std::string& h0_path, const std::string& v_path,
               const std::vector<int>& random_spec, std::uint64_t seed,
               double wide_scale, const std::vector<std::string>& tols,
               const std::string& out_dir) {
  using namespace specshift;
  VerifyOptions opts;
  opts.seed = seed;
  opts.wide_scale = wide_scale;
  opts.tol_overrides = parse_tols(tols);
  if (!random_spec.empty()) {
    opts.pair_count = random_spec[0];
    opts.min_dim = opts.max_dim = random_spec[1];
    if (opts.pair_count < 1 || opts.min_dim < 2)
      throw validation_error("--random expects COUNT >= 1 and DIM >= 2");
  }
  if (!h0_path.empty()) {
    if (v_path.empty()) throw validation_error("--h0 requires --v");
    opts.explicit_pairs.push_back({load_matrix(h0_path), load_matrix(v_path)});
  }
  VerifyReport report = run_full_verification(opts);
  write_file(out_path(out_dir, "report.json"), report_to_json(report) + "\n");
  std::cout << report.passed << " checks passed, " << report.failed << " failed ("
            << report.wall_seconds << " s); report written\n";
  return report.failed == 0 ? kExitOk : kExitCheckFailure;
}

int run_spline(const std::vector<double>& nodes, const std::string& kind,
               const GridSpec& grid, const std::string& out_dir) {
  using namespace specshift;
  if (nodes.empty()) throw validation_error("--nodes is required");
  NodeMultiset ns(nodes);
  SplineKind k;
  if (kind == "basic")
    k = SplineKind::basic;
  else if (kind == "cumulative")
    k = SplineKind::cumulative;
  else
    throw validation_error("--kind must be basic or cumulative");
  PiecewisePolynomial P = spline_to_piecewise(ns, k);
  GridSpec g = grid;
  if (!g.set) {
    g.min = ns.min_node() - 1.0;
    g.max = ns.max_node() + 1.0;
    g.count = 41;
  }
  std::ostringstream csv;
  csv << sample_csv(make_grid(g.min, g.max, g.count), {"kernel"}, {&P});
  if (k == SplineKind::basic)
    csv << "# integral," << format_double(P.integral()) << "\n";
  csv << "# piecewise," << nlohmann::json::parse(piecewise_to_json(P)).dump() << "\n";
  if (out_dir.empty())
    std::cout << csv.str();
  else
    write_file(out_path(out_dir, "spline.csv"), csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"higher-order spectral shift densities for Hermitian pairs"};
  app.require_subcommand(1);

  std::string h0_path, v_path, out_dir, format = "csv", grid_str, kind = "basic";
  int order = 2;
  std::uint64_t seed = 20240815;
  double wide_scale = 0.0;
  std::vector<std::string> tols;
  std::vector<int> random_spec;
  std::vector<double> nodes;

  CLI::App* compute = app.add_subcommand("compute", "compute eta_1..eta_p for a pair");
  compute->add_option("-p,--order", order, "highest density order")->check(CLI::PositiveNumber);
  compute->add_option("--h0", h0_path, "H0 matrix json")->required();
  compute->add_option("--v", v_path, "perturbation matrix json")->required();
  compute->add_option("--grid", grid_str, "sample grid MIN:MAX:N");
  compute->add_option("--out", out_dir, "output directory");
  compute->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--h0", h0_path, "H0 matrix json (with --v: verify this pair)");
  verify->add_option("--v", v_path, "perturbation matrix json");
  verify->add_option("--random", random_spec, "COUNT DIM for the generated ensemble")
      ->expected(2);
  verify->add_option("--seed", seed, "ensemble seed");
  verify->add_option("--wide-spectrum", wide_scale, "spectra span [-SCALE, SCALE]");
  verify->add_option("--tol", tols, "tolerance override NAME=VALUE")->take_all();
  verify->add_option("--out", out_dir, "output directory");

  CLI::App* spline = app.add_subcommand("spline", "sample a spline kernel");
  spline->add_option("--nodes", nodes, "node values")->required();
  spline->add_option("--kind", kind, "basic or cumulative");
  spline->add_option("--grid", grid_str, "sample grid MIN:MAX:N");
  spline->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    GridSpec grid;
    if (!grid_str.empty()) grid = parse_grid(grid_str);
    if (compute->parsed()) return run_compute(h0_path, v_path, order, grid, out_dir, format);
    if (verify->parsed())
      return run_verify(h0_path, v_path, random_spec, seed, wide_scale, tols, out_dir);
    if (spline->parsed()) return run_spline(nodes, kind, grid, out_dir);
    return kExitValidation;
  } catch (const specshift::capacity_error& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const specshift::symmetry_violation_error& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return kExitCheckFailure;
  } catch (const specshift::eigensolver_error& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return kExitCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
