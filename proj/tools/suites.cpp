#include "suites.hpp"

#include "sweep.hpp"

#include "hilbert/errors.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/normalize.hpp"
#include "hilbert/regularity.hpp"
#include "hilbert/triangles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

namespace hilbert::tools {
namespace {

constexpr double kPi = std::numbers::pi;

// Collects failed checks and a short summary.
class Checker {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (first_failure_.empty()) first_failure_ = what;
    }
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool passed() const { return failures_ == 0; }
  std::string detail() const {
    if (failures_ == 0) return notes_;
    return notes_ + (notes_.empty() ? "" : "; ") + std::to_string(failures_) + "/" + std::to_string(checks_) +
           " failed, first: " + first_failure_;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_failure_;
  std::string notes_;
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Point2 random_interior(const ConvexDomain& d, RandomStream& rng, double max_fraction) {
  const Point2 c = d.center();
  const Point2 b = d.boundary_point(d.param_period() * rng.uniform());
  return c + (max_fraction * rng.uniform()) * (b - c);
}

Vec2 random_direction(RandomStream& rng) { return unit_vector(2.0 * kPi * rng.uniform()); }

ProjectiveMap random_map(RandomStream& rng) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) += (i == 2 ? 0.3 : 0.6) * (2.0 * rng.uniform() - 1.0);
  }
  return ProjectiveMap(m);
}

// Point at Hilbert distance s from q along +x.
Point2 along_x(const ConvexDomain& d, const Point2& q, double s) {
  const auto [tp, tm] = d.exit_distances(q, {1, 0});
  return q + hilbert_polar_radius(tp, tm, s) * Vec2{1, 0};
}

// Upper bound for the Hilbert area of {x > 0, lambda x < y < tau} in {|x|^alpha < y < 1}.
double wedge_bound(double alpha, double lambda, double tau) {
  const double big_lambda = alpha * std::pow(lambda, -1.0 / alpha) /
                            ((1.0 - std::pow(tau, alpha - 1.0) * std::pow(lambda, -alpha)) *
                             (1.0 - std::pow(tau, 2.0 - 2.0 / alpha) * std::pow(lambda, -2.0)));
  const double integral = std::pow(tau / lambda, 1.0 - 1.0 / alpha) / (1.0 - 1.0 / alpha);
  return kPi / (4.0 * (1.0 - tau)) * big_lambda * integral;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void klein(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto disk = ConvexDomain::disk();
  double worst = 0.0;
  for (double r : {0.1, 0.5, 0.9}) worst = std::max(worst, std::abs(hilbert_distance(disk, {0, 0}, {r, 0}) - std::atanh(r)));
  c.check(worst < 1e-9, "distance = artanh(r)");
  const double h = density(disk, {0.5, 0});
  c.check(std::abs(h - std::pow(0.75, -1.5)) < 1e-4, "density at (0.5, 0)");
  const double ball = ball_area(disk, {0, 0}, 1.0).value;
  const double golden = 4.0 * kPi * std::pow(std::sinh(0.5), 2);
  c.check(std::abs(ball - golden) < 0.01 * golden, "ball_area(0, 1)");
  const std::vector<std::array<double, 3>> triangles{
      {90, 210, 330}, {0, 100, 250}, {10, 20, 200}, {47, 46, 338}, {57, 86, 92}};
  double lo = 1e300, hi = -1e300;
  for (const auto& deg : triangles) {
    const auto t = make_ideal_triangle(disk, deg[0] * kPi / 180, deg[1] * kPi / 180, deg[2] * kPi / 180);
    const double a = ideal_triangle_area(disk, t).value;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    c.check(std::abs(a - kPi) < 0.01 * kPi, "ideal triangle area = pi");
  }
  const double elapsed = seconds_since(start);
  c.check(elapsed < 120.0, "runtime under 120 s");
  c.note(fmt("distance err %.1e, density %.6f, ball %.5f vs %.5f, 5 ideal triangles in [%.5f, %.5f]", worst, h, ball,
             golden, lo, hi));
}

void tangent_wedge(Checker& c) {
  for (const auto& [alpha, lambda, tau] : {std::array<double, 3>{2.0, 1.0, 2.0 / 3.0}, std::array<double, 3>{1.5, 1.0, 0.5}}) {
    const auto g = ConvexDomain::power_cap(alpha);
    const auto q = region_area(g, PolygonRegion{{{0, 0}, {tau / lambda, tau}, {0, tau}}});
    const std::size_t n = q.history.size();
    const double step = n >= 2 ? std::abs(q.history[n - 1] - q.history[n - 2]) / q.history[n - 1] : 1.0;
    const double bound = wedge_bound(alpha, lambda, tau);
    c.check(!q.diverged && step < 0.01, "wedge quadrature converges");
    c.check(q.value <= bound, "wedge area below the analytic bound");
    c.note(fmt("alpha %.1f: area %.4f <= %.2f, last depth step %.1e", alpha, q.value, bound, step));
  }
}

void comparison(Checker& c) {
  RandomStream rng(101);
  QuadratureOptions matched;
  matched.uniform_depth = 1;
  matched.unit_ball = UnitBallOptions{64, false, false};
  std::size_t violations = 0;
  for (int i = 0; i < 500; ++i) {
    std::optional<ConvexDomain> inner, outer;
    if (i % 2 == 0) {
      const double r = 0.5 + rng.uniform();
      const Point2 o{0.3 * (2 * rng.uniform() - 1), 0.3 * (2 * rng.uniform() - 1)};
      inner = ConvexDomain::disk(o, r);
      const double grow = 1.0 + rng.uniform();
      const double slack = (grow - 1.0) * r;
      const Vec2 shift = slack * rng.uniform() * random_direction(rng);
      outer = ConvexDomain::disk(o + shift, grow * r);
    } else {
      const double p = 1.2 + 7.0 * rng.uniform();
      inner = ConvexDomain::pball(p);
      // The p-ball lies in the disk of radius sqrt 2, inside any n-gon with that apothem.
      const int sides = 3 + static_cast<int>(rng.index(6));
      const double apothem = std::sqrt(2.0) * (1.0 + 0.5 * rng.uniform());
      outer = ConvexDomain::regular_polygon(sides, apothem / std::cos(kPi / sides), 2 * kPi * rng.uniform());
    }
    const Point2 p = random_interior(*inner, rng, 0.999);
    const Point2 q = random_interior(*inner, rng, 0.999);
    const Vec2 v = random_direction(rng);
    const bool f_ok = finsler_norm(*outer, p, v) <= finsler_norm(*inner, p, v) + 1e-9;
    const bool d_ok = hilbert_distance(*outer, p, q) <= hilbert_distance(*inner, p, q) + 1e-9;
    const Point2 m = random_interior(*inner, rng, 0.6);
    const double s = 0.05 + 0.1 * rng.uniform();
    const PolygonRegion region{{m + s * Vec2{-1, -0.6}, m + s * Vec2{1, -0.8}, m + s * Vec2{0.2, 1}}};
    const double mu_inner = region_area(*inner, region, matched).value;
    const double mu_outer = region_area(*outer, region, matched).value;
    const bool mu_ok = mu_outer <= mu_inner * (1 + 1e-3);
    if (!(f_ok && d_ok && mu_ok)) ++violations;
  }
  c.check(violations == 0, "comparison inequalities");
  c.note(fmt("500 nested pairs, %zu violations", violations));
}

void projective(Checker& c) {
  RandomStream rng(103);
  const std::vector<ConvexDomain> domains{ConvexDomain::disk(), ConvexDomain::pball(3.0),
                                          ConvexDomain::regular_polygon(5, 1.0, 0.3)};
  QuadratureOptions opt;
  opt.tol = 1e-4;
  double dist_drift = 0.0;
  double area_drift = 0.0;
  double ideal_drift = 0.0;
  int maps = 0;
  while (maps < 200) {
    const ConvexDomain& d = domains[maps % domains.size()];
    const ProjectiveMap h = random_map(rng);
    std::optional<ConvexDomain> image;
    try {
      image = projective_image(d, h);
    } catch (const GeometryError&) {
      continue;
    }
    ++maps;
    const Point2 p = random_interior(d, rng, 0.95);
    const Point2 q = random_interior(d, rng, 0.95);
    const double before = hilbert_distance(d, p, q);
    if (before > 1e-6) {
      dist_drift = std::max(dist_drift, std::abs(hilbert_distance(*image, h.apply(p), h.apply(q)) - before) / before);
    }
    const Point2 m = random_interior(d, rng, 0.5);
    const std::vector<Point2> tri{m + Vec2{-0.2, -0.1}, m + Vec2{0.2, -0.15}, m + Vec2{0.05, 0.25}};
    std::vector<Point2> mapped;
    for (const auto& x : tri) mapped.push_back(h.apply(x));
    const double a0 = region_area(d, PolygonRegion{tri}, opt).value;
    const double a1 = region_area(*image, PolygonRegion{mapped}, opt).value;
    area_drift = std::max(area_drift, std::abs(a1 - a0) / a0);
    if (maps % 40 == 1) {
      const double period = d.param_period();
      const auto t = make_ideal_triangle(d, 0.1 * period, 0.45 * period, 0.75 * period);
      const auto ht = make_ideal_triangle(*image, h.apply(t.a), h.apply(t.b), h.apply(t.c));
      const double x = ideal_triangle_area(d, t).value;
      const double y = ideal_triangle_area(*image, ht).value;
      ideal_drift = std::max(ideal_drift, std::abs(x - y) / x);
    }
  }
  c.check(dist_drift <= 1e-6, "distance drift");
  c.check(area_drift <= 0.02, "triangle area drift");
  c.check(ideal_drift <= 0.02, "ideal triangle area drift");
  c.note(fmt("200 maps: distance drift %.1e, triangle area drift %.1e, ideal triangle drift %.1e (5 maps)", dist_drift,
             area_drift, ideal_drift));
}

void dichotomy(Checker& c) {
  const auto start = std::chrono::steady_clock::now();
  SweepConfig config;
  config.grid = {2, 3, 4, 6, 10, 20};
  const auto rows = run_sweep(config);
  std::ostringstream thin, area;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    thin << (i ? " < " : "") << fmt("%.4f", rows[i].delta_thin);
    area << (i ? " < " : "") << fmt("%.3f", rows[i].sup_area) << (rows[i].diverged ? "*" : "");
    if (i > 0) {
      c.check(rows[i].delta_thin > rows[i - 1].delta_thin, fmt("delta_thin increases at p = %g", rows[i].param));
      c.check(rows[i].sup_area > rows[i - 1].sup_area, fmt("sup_area increases at p = %g", rows[i].param));
    }
  }
  c.check(rows[0].diverged == 0, "no diverged flags on the disk");
  const auto square = ConvexDomain::unit_square();
  TriangleSamplerConfig sampler;
  // Most square triples put two vertices on one edge and are rejected, and a
  // divergent ladder grows linearly in its depth, so the square gets more
  // samples and a longer ladder. Its densities are cheap.
  sampler.budget = 400;
  sampler.seed = config.seed;
  sampler.focus_params = default_focus_params(square);
  sampler.focus_probability = config.focus_probability;
  sampler.focus_jitter = config.focus_jitter;
  TriangleAreaOptions options;
  options.quadrature.tol = config.tol;
  options.quadrature.max_refinements = config.max_refinements;
  options.ladder_levels = 24;
  const SupAreaResult sq = sup_area_search(square, sampler, options);
  const double largest = sq.diverged_values.empty()
                             ? 0.0
                             : *std::max_element(sq.diverged_values.begin(), sq.diverged_values.end());
  c.check(sq.diverged >= 1, "square produces a diverged flag");
  c.check(largest > 10.0 * rows[0].sup_area, "square partial area exceeds 10x the disk value");
  c.check(seconds_since(start) < 900.0, "runtime under 15 min");
  c.note("delta_thin " + thin.str() + "; sup_area " + area.str() + fmt(" (* = diverged lower bound); square: %zu diverged, partial %.2f", sq.diverged, largest));
}

void ball_growth(Checker& c) {
  for (const auto& d : {ConvexDomain::disk(), ConvexDomain::pball(4.0)}) {
    const Point2 q{0, 0};
    double v1 = 1e300;
    for (double s : {1.0, 3.0, 5.0, 7.0}) v1 = std::min(v1, ball_area(d, along_x(d, q, s), 1.0).value);
    double worst = 1e300;
    for (int r = 2; r <= 8; ++r) {
      const double area = ball_area(d, q, r).value;
      const double bound = (r / 2.0 - 1.0) * v1;
      worst = std::min(worst, area / std::max(bound, 1e-300));
      c.check(area >= bound, fmt("%s ball of radius %d", d.label().c_str(), r));
    }
    c.note(fmt("%s: V1 %.4f, min area/bound %.2f", d.label().c_str(), v1, worst));
  }
}

SampledFunction power_function(double b) {
  return sample_function([b](double x) { return std::pow(std::abs(x), b); }, 1.0, kRegularityGrid,
                         [b](double x) { return b * std::copysign(std::pow(std::abs(x), b - 1.0), x); });
}

void regularity(Checker& c) {
  RandomStream rng(107);
  double identity_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double h = 1.0 + 4.0 * rng.uniform();
    const double a = 0.25 + rng.uniform();
    const double e = (1.0 + a) / a;
    const long double exact = std::pow(4.0L * h * (h + 1.0L), static_cast<long double>(e));
    const double h2 = chain_h2(h, a);
    // Relative error of pow, scaled by its condition number in the exponent.
    const double cond = 1.0 + e * (2.0 + std::log(4.0 * h * (h + 1.0)));
    identity_err = std::max(identity_err, std::abs(h2 - static_cast<double>(exact)) / (static_cast<double>(exact) * cond));
    const long double alpha = 1.0L + std::log2(1.0L + 1.0L / exact);
    identity_err = std::max(identity_err, std::abs(chain_alpha(h2) - static_cast<double>(alpha)));
    c.check(chain_alpha(h2) > 1.0, "alpha > 1");
  }
  c.check(identity_err < 1e-15, "constant identities");

  std::vector<std::pair<std::string, SampledFunction>> corpus{
      {"x^2", power_function(2.0)}, {"|x|^1.2", power_function(1.2)}, {"|x|^1.5", power_function(1.5)}};
  const std::vector<ConvexDomain> domains{ConvexDomain::disk(), ConvexDomain::ellipse({0.3, -0.2}, 2.0, 0.7, 0.4),
                                          ConvexDomain::pball(1.5), ConvexDomain::pball(2.0), ConvexDomain::pball(4.0)};
  for (const auto& d : domains) {
    for (double param : {0.4, 2.5}) {
      const Point2 b = d.boundary_point(param * d.param_period() / (2 * kPi));
      SampledFunction f;
      f.a = 0.1;
      f.values = boundary_graph(d, b, tangent_frame(d, b), 0.2, kRegularityGrid).f;
      corpus.emplace_back(d.label(), f);
    }
  }
  double worst_bound = 1e300, worst_derivative = 1e300;
  for (const auto& [name, f] : corpus) {
    const auto r = holder_bound_check(f, qsc_constant(f));
    const double k = qs_constant(f.derivative.empty() ? central_derivative(f) : f.derivative);
    const auto d = derivative_holder_check(f, k);
    c.check(r.bound_margin >= -1e-9, "bound check on " + name);
    c.check(d.margin >= -1e-9, "derivative check on " + name);
    worst_bound = std::min(worst_bound, r.bound_margin);
    worst_derivative = std::min(worst_derivative, d.margin);
  }
  const double circle = graph_alpha_fit(boundary_graph(ConvexDomain::disk(), {0, -1}, {{0, -1}, {1, 0}, {0, 1}}, 0.5)).alpha;
  const double ball =
      graph_alpha_fit(boundary_graph(ConvexDomain::pball(4.0), {0, -1}, {{0, -1}, {1, 0}, {0, 1}}, 0.5)).alpha;
  c.check(std::abs(circle - 2.0) <= 0.05, "circle alpha fit");
  c.check(std::abs(ball - 4.0) <= 0.1, "4-ball alpha fit");
  c.note(fmt("identity err %.1e; %zu functions, min bound margin %.3g, min derivative margin %.3g; alpha fit %.4f and %.4f",
             identity_err, corpus.size(), worst_bound, worst_derivative, circle, ball));
}

void graph(Checker& c) {
  const Frame up{{0, -1}, {1, 0}, {0, 1}};
  double worst = 0.0;
  const auto circle = boundary_graph(ConvexDomain::disk(), {0, -1}, up, 0.5);
  for (std::size_t i = 0; i < circle.x.size(); ++i) {
    worst = std::max(worst, std::abs(circle.f[i] - (1.0 - std::sqrt(1.0 - circle.x[i] * circle.x[i]))));
  }
  const auto ball = boundary_graph(ConvexDomain::pball(4.0), {0, -1}, up, 0.5);
  for (std::size_t i = 0; i < ball.x.size(); ++i) {
    worst = std::max(worst, std::abs(ball.f[i] - (1.0 - std::pow(1.0 - std::pow(ball.x[i], 4), 0.25))));
  }
  c.check(worst < 1e-9, "graphs match the analytic boundary");
  const std::vector<ConvexDomain> domains{ConvexDomain::disk(), ConvexDomain::ellipse({0.3, -0.2}, 2.0, 0.7, 0.4),
                                          ConvexDomain::pball(1.5), ConvexDomain::pball(4.0),
                                          ConvexDomain::pball(8.0, {0.5, 0.5}, 2.0)};
  int strips = 0;
  for (const auto& d : domains) {
    for (double param : {0.3, 2.0, 4.5}) {
      const Point2 b = d.boundary_point(param * d.param_period() / (2 * kPi));
      const auto g = boundary_graph(d, b, tangent_frame(d, b), 0.2);
      ++strips;
      c.check(midpoint_convex(g.f), "midpoint convexity");
      c.check(g.f[g.f.size() / 2] == 0.0, "f(0) = 0");
      c.check(g.f.front() > 0.0 && g.f.back() > 0.0, "endpoint positivity");
    }
  }
  c.note(fmt("analytic err %.1e; %d strips convex with f(0) = 0 and positive ends", worst, strips));
}

void normalize(Checker& c) {
  RandomStream rng(109);
  double residual = 0.0, isometry = 0.0, idempotence = 0.0;
  double alpha_min = 1.0, alpha_max = 0.0;
  int tested = 0;
  while (tested < 100) {
    const int which = tested % 3;
    const ConvexDomain d = which == 0   ? ConvexDomain::disk()
                           : which == 1 ? ConvexDomain::ellipse({0.2, 0.1}, 1.5, 0.6, 2 * kPi * rng.uniform())
                                        : ConvexDomain::pball(1.5 + 6.5 * rng.uniform());
    const double period = d.param_period();
    IdealTriangle t;
    try {
      t = make_ideal_triangle(d, period * rng.uniform(), period * rng.uniform(), period * rng.uniform());
    } catch (const GeometryError&) {
      continue;
    }
    if (!t.valid) continue;
    ++tested;
    const auto r = normalize_triangle_pointed(d, t);
    residual = std::max({residual, r.vertex_residual, r.tangency_residual});
    alpha_min = std::min(alpha_min, r.alpha);
    alpha_max = std::max(alpha_max, r.alpha);
    const auto v = t.vertices();
    const Point2 m0 = lerp(v[0], v[1], 0.5), m1 = lerp(v[1], v[2], 0.5), m2 = lerp(v[2], v[0], 0.5);
    for (const auto& [p, q] : {std::pair{m0, m1}, std::pair{m1, m2}, std::pair{m2, m0}}) {
      isometry = std::max(isometry, std::abs(hilbert_distance(d, p, q) -
                                             hilbert_distance(r.normalized, r.map.apply(p), r.map.apply(q))));
    }
    const auto again = normalize_triangle_pointed(
        r.normalized, make_ideal_triangle(r.normalized, Point2{1, 0}, Point2{0, 1}, Point2{1, 1}));
    idempotence = std::max(idempotence, again.map.projective_distance(ProjectiveMap::identity()));
  }
  c.check(residual < 1e-8, "residuals");
  c.check(alpha_min > 0.0 && alpha_max <= 0.5, "alpha in (0, 1/2]");
  c.check(idempotence < 1e-8, "idempotence");
  c.check(isometry < 1e-6, "isometry");
  c.note(fmt("100 triangles: residual %.1e, alpha in [%.4f, %.4f], idempotence %.1e, isometry %.1e", residual, alpha_min,
             alpha_max, idempotence, isometry));
}

struct Suite {
  std::string name;
  std::function<void(Checker&)> run;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"klein", klein},           {"tangent-wedge", tangent_wedge}, {"comparison", comparison},
      {"projective", projective}, {"dichotomy", dichotomy},         {"ball-growth", ball_growth},
      {"regularity", regularity}, {"graph", graph},                 {"normalize", normalize},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.push_back(s.name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name) {
  for (const auto& s : suites()) {
    if (s.name != name) continue;
    const auto start = std::chrono::steady_clock::now();
    Checker c;
    SuiteResult out{name, false, "", 0.0};
    try {
      s.run(c);
      out.passed = c.passed();
      out.detail = c.detail();
    } catch (const std::exception& e) {
      out.detail = c.detail() + (c.detail().empty() ? "" : "; ") + "error: " + e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
  throw GeometryError(ErrorKind::InvalidArgument, "unknown suite \"" + name + "\"");
}

}  // namespace hilbert::tools
