#include "io.hpp"
#include "suites.hpp"
#include "sweep.hpp"

#include "hilbert/errors.hpp"
#include "hilbert/metric.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace hilbert;
using namespace hilbert::tools;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::string spec;
  std::string out;
  double tol = 1e-3;
  std::size_t budget = 32;
  std::size_t delta_budget = 20;
  std::uint64_t seed = 7;
  std::vector<double> p, q, params, grid;
  std::string family = "pball";
  std::string suite;
  bool report = false;
};

IdealTriangle triangle_from(const ConvexDomain& d, const std::vector<double>& params) {
  return make_ideal_triangle(d, params[0], params[1], params[2]);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw GeometryError(ErrorKind::InvalidArgument, "cannot write " + o.out);
  f << text;
}

int cmd_dist(const Options& o) {
  const auto d = load_domain(o.spec);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g\n", hilbert_distance(d, {o.p[0], o.p[1]}, {o.q[0], o.q[1]}));
  emit(o, buf);
  return kOk;
}

int cmd_area(const Options& o) {
  const auto d = load_domain(o.spec);
  TriangleAreaOptions options;
  options.quadrature.tol = o.tol;
  const auto r = ideal_triangle_area_report(d, triangle_from(d, o.params), options);
  emit(o, (o.report ? to_json(r) : to_json(r.total)).dump(2) + "\n");
  return kOk;
}

int cmd_sweep(const Options& o) {
  SweepConfig config;
  config.family = o.family;
  config.grid = o.grid;
  config.area_budget = o.budget;
  config.delta_budget = o.delta_budget;
  config.seed = o.seed;
  config.tol = o.tol;
  std::ostringstream csv;
  write_csv(csv, run_sweep(config));
  emit(o, csv.str());
  return kOk;
}

int cmd_verify(const Options& o) {
  const auto r = run_suite(o.suite);
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1f s): ", r.seconds);
  emit(o, std::string(r.passed ? "PASS " : "FAIL ") + r.name + buf + r.detail + "\n");
  return r.passed ? kOk : kFailed;
}

int cmd_normalize(const Options& o) {
  const auto d = load_domain(o.spec);
  emit(o, to_json(normalize_triangle_pointed(d, triangle_from(d, o.params))).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for planar Hilbert geometries"};
  app.set_config("--config", "", "TOML or INI file with default option values");
  app.require_subcommand(1);
  Options o;

  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec, "Domain spec: JSON file or inline JSON")->required();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Write output to FILE instead of stdout"); };

  auto* dist = app.add_subcommand("dist", "Hilbert distance between two interior points");
  add_spec(dist);
  dist->add_option("--p", o.p, "First point: X Y")->expected(2)->required()->allow_extra_args(false);
  dist->add_option("--q", o.q, "Second point: X Y")->expected(2)->required()->allow_extra_args(false);
  add_out(dist);

  auto* area = app.add_subcommand("area", "Hilbert area of an ideal triangle (JSON)");
  add_spec(area);
  area->add_option("--params", o.params, "Boundary parameters of the vertices: T1 T2 T3")->expected(3)->required();
  area->add_option("--tol", o.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  area->add_flag("--report", o.report, "Print the full report with the corner ladders");
  add_out(area);

  auto* sweep = app.add_subcommand("sweep", "Delta and sup-area sweep over a family (CSV)");
  sweep->add_option("--family", o.family, "pball or polygon")->check(CLI::IsMember({"pball", "polygon"}));
  sweep->add_option("--grid", o.grid, "Parameter grid, comma separated")->delimiter(',')->required();
  sweep->add_option("--budget", o.budget, "Ideal triangles sampled per row")->check(CLI::PositiveNumber);
  sweep->add_option("--delta-budget", o.delta_budget, "Triangles and quadruples sampled for the delta estimates")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", o.seed, "Sampler seed");
  sweep->add_option("--tol", o.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  add_out(sweep);

  auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
  verify->add_option("suite", o.suite, "Suite name")->required();
  add_out(verify);

  auto* normalize = app.add_subcommand("normalize", "Normal form of a triangle-pointed domain (JSON)");
  add_spec(normalize);
  normalize->add_option("--params", o.params, "Boundary parameters of the vertices: T1 T2 T3")->expected(3)->required();
  add_out(normalize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*dist) return cmd_dist(o);
    if (*area) return cmd_area(o);
    if (*sweep) return cmd_sweep(o);
    if (*verify) return cmd_verify(o);
    if (*normalize) return cmd_normalize(o);
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
