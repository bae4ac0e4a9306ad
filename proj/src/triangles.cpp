#include "hilbert/triangles.hpp"

#include "hilbert/errors.hpp"
#include "hilbert/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hilbert {
namespace {

constexpr int kSideSamples = 64;
constexpr double kMaxLogScale = 8.0;

void require_valid(const IdealTriangle& t) {
  if (!t.valid) throw GeometryError(ErrorKind::InvalidTriangle, "ideal triangle is not valid: " + t.invalid_reason);
}

void check_vertices(const Point2& a, const Point2& b, const Point2& c) {
  const double scale = std::max({norm(b - a), norm(c - b), norm(a - c)});
  if (!(scale > 0.0) || norm(b - a) < 1e-12 * scale || norm(c - b) < 1e-12 * scale ||
      norm(a - c) < 1e-12 * scale || scale < 1e-14) {
    throw GeometryError(ErrorKind::DegenerateVertices, "coincident triangle vertices");
  }
  if (std::abs(cross(b - a, c - a)) <= 1e-12 * scale * scale) {
    throw GeometryError(ErrorKind::DegenerateVertices, "collinear triangle vertices");
  }
}

// Sides must pass through the interior away from their endpoints.
void certify(const ConvexDomain& domain, IdealTriangle& t) {
  const auto v = t.vertices();
  t.valid = true;
  for (int k = 0; k < 3 && t.valid; ++k) {
    const Point2& p = v[k];
    const Point2& q = v[(k + 1) % 3];
    for (int i = 1; i < kSideSamples; ++i) {
      if (!domain.contains(lerp(p, q, static_cast<double>(i) / kSideSamples))) {
        t.valid = false;
        t.invalid_reason = "side in boundary";
        break;
      }
    }
  }
  if (t.valid) {
    const Point2 g = (v[0] + v[1] + v[2]) / 3.0;
    if (!domain.contains(g)) {
      t.valid = false;
      t.invalid_reason = "hull not inside the domain";
    }
  }
}

Eigen::Vector3d homogeneous(const Point2& p) { return {p.x, p.y, 1.0}; }

}  // namespace

ProjectiveMap balancing_map(const ConvexDomain& domain, const IdealTriangle& t) {
  const auto v = t.vertices();
  Eigen::Matrix3d b;
  for (int k = 0; k < 3; ++k) b.col(k) = homogeneous(v[k]);
  // In barycentric coordinates the supporting line at vertex k reads
  // l(v_{k+1}) y_{k+1} + l(v_{k+2}) y_{k+2} = 0. For a conic the three ratios
  // r_k = l(v_{k+2}) / l(v_{k+1}) multiply to 1.
  std::array<double, 3> log_r{};
  for (int k = 0; k < 3; ++k) {
    const Line2 l = domain.supporting_line(v[k]);
    const double l_next = std::abs(l.signed_distance(v[(k + 1) % 3]));
    const double l_prev = std::abs(l.signed_distance(v[(k + 2) % 3]));
    if (!(l_next > 0.0 && l_prev > 0.0)) {
      throw GeometryError(ErrorKind::InvalidTriangle, "supporting line at a vertex meets another vertex");
    }
    log_r[k] = std::log(l_prev / l_next);
  }
  const double eps = (log_r[0] + log_r[1] + log_r[2]) / 3.0;
  // Scale barycentric coordinates by (1, mu, nu) so each supporting line
  // becomes (up to the common defect eps) parallel to the opposite side.
  // Near a corner the ratios are extreme; the spread is clamped so that the
  // map stays well conditioned, more tightly if it is still singular.
  const double log_mu = log_r[2] - eps;
  const double log_nu = log_mu + log_r[0] - eps;
  const double mean = (log_mu + log_nu) / 3.0;
  Eigen::Matrix3d e;
  for (int k = 0; k < 3; ++k) {
    const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
    e.col(k) = Eigen::Vector3d(std::cos(angle), std::sin(angle), 1.0);
  }
  const Eigen::Matrix3d b_inv = b.inverse();
  for (double cap = kMaxLogScale;; cap /= 2.0) {
    auto clamped = [&](double x) { return std::exp(std::clamp(x - mean, -cap, cap)); };
    const Eigen::Vector3d scale(clamped(0.0), clamped(log_mu), clamped(log_nu));
    try {
      return ProjectiveMap(e * scale.asDiagonal() * b_inv);
    } catch (const GeometryError&) {
      if (cap < 0.25) throw;
    }
  }
}

IdealTriangle make_ideal_triangle(const ConvexDomain& domain, double t1, double t2, double t3) {
  for (double t : {t1, t2, t3}) {
    if (!std::isfinite(t)) throw GeometryError(ErrorKind::InvalidArgument, "boundary parameter is not finite");
  }
  IdealTriangle t;
  t.a = domain.boundary_point(t1);
  t.b = domain.boundary_point(t2);
  t.c = domain.boundary_point(t3);
  check_vertices(t.a, t.b, t.c);
  t.params = std::array<double, 3>{t1, t2, t3};
  certify(domain, t);
  return t;
}

IdealTriangle make_ideal_triangle(const ConvexDomain& domain, const Point2& a, const Point2& b, const Point2& c) {
  check_vertices(a, b, c);
  for (const Point2& p : {a, b, c}) {
    if (!(std::abs(domain.level(p)) <= domain.boundary_tolerance())) {
      throw GeometryError(ErrorKind::NotOnBoundary, "triangle vertex is not on the boundary");
    }
  }
  IdealTriangle t;
  t.a = a;
  t.b = b;
  t.c = c;
  certify(domain, t);
  return t;
}

CornerDecomposition corner_decomposition(const ConvexDomain&, const IdealTriangle& t, double s) {
  require_valid(t);
  if (!(s > 0.0 && s <= 0.5)) throw GeometryError(ErrorKind::InvalidArgument, "cut fraction must lie in (0, 1/2]");
  const auto v = t.vertices();
  CornerDecomposition out;
  out.s = s;
  for (int k = 0; k < 3; ++k) {
    const Point2& p = v[k];
    const Point2& next = v[(k + 1) % 3];
    const Point2& prev = v[(k + 2) % 3];
    out.corners[k] = CornerPiece{p, lerp(p, next, s), lerp(p, prev, s)};
  }
  // Walk each side from its first cut to the cut of the next vertex.
  for (int k = 0; k < 3; ++k) {
    const Point2 from = out.corners[k].cut_next;
    const Point2 to = out.corners[(k + 1) % 3].cut_prev;
    if (out.hexagon.empty() || norm(out.hexagon.back() - from) > 0.0) out.hexagon.push_back(from);
    if (norm(to - from) > 1e-15 * (1.0 + norm(from))) out.hexagon.push_back(to);
  }
  if (out.hexagon.size() > 1 && norm(out.hexagon.back() - out.hexagon.front()) <= 1e-15 * (1.0 + norm(out.hexagon.front()))) {
    out.hexagon.pop_back();
  }
  return out;
}

TriangleAreaReport ideal_triangle_area_report(const ConvexDomain& original, const IdealTriangle& original_t,
                                              const TriangleAreaOptions& options) {
  require_valid(original_t);
  ConvexDomain domain = original;
  IdealTriangle t = original_t;
  if (options.balance) {
    try {
      const ProjectiveMap h = balancing_map(original, original_t);
      domain = projective_image(original, h);
      t.a = h.apply(original_t.a);
      t.b = h.apply(original_t.b);
      t.c = h.apply(original_t.c);
    } catch (const GeometryError&) {
      domain = original;  // integrate in the original frame
      t = original_t;
    }
  }
  if (options.ladder_levels < 4) throw GeometryError(ErrorKind::InvalidArgument, "ladder needs at least 4 levels");
  const int levels = options.ladder_levels;
  TriangleAreaReport report;
  const CornerDecomposition medial = corner_decomposition(domain, t, 0.5);
  report.hexagon = region_area(domain, PolygonRegion{medial.hexagon}, options.quadrature);

  const auto v = t.vertices();
  std::size_t cells = report.hexagon.cells;
  bool any_diverged = report.hexagon.diverged;
  for (int k = 0; k < 3; ++k) {
    const Point2& p = v[k];
    const Point2& next = v[(k + 1) % 3];
    const Point2& prev = v[(k + 2) % 3];
    CornerLadder& ladder = report.corners[k];
    for (int level = 1; level < levels; ++level) {
      const double s0 = std::ldexp(1.0, -level);
      const double s1 = std::ldexp(1.0, -level - 1);
      const PolygonRegion piece{{lerp(p, next, s0), lerp(p, next, s1), lerp(p, prev, s1), lerp(p, prev, s0)}};
      const QuadratureEstimate q = region_area(domain, piece, options.quadrature);
      ladder.increments.push_back(q.value);
      ladder.partial += q.value;
      ladder.error_bound += q.error_bound;
      cells += q.cells;
      // An unresolved piece ends the ladder; the partial sum is a lower bound.
      if (q.diverged || q.error_bound > options.quadrature.tol * q.value) {
        ladder.diverged = true;
        break;
      }
    }
    const auto& inc = ladder.increments;
    const std::size_t n = inc.size();
    const double r1 = ladder.diverged ? 0.0 : inc[n - 1] / inc[n - 2];
    const double r0 = ladder.diverged ? 0.0 : inc[n - 2] / inc[n - 3];
    if (r1 >= options.divergence_ratio && r0 >= options.divergence_ratio) ladder.diverged = true;
    if (!ladder.diverged && r1 > 0.0 && r1 < 1.0) {
      // Aitken's delta-squared on the partial sums: the remaining increments
      // are taken to decay geometrically with the last ratio.
      ladder.tail = inc[n - 1] * r1 / (1.0 - r1);
      ladder.error_bound += std::abs(ladder.tail - inc[n - 1] * r0 / (1.0 - r0)) + 1e-3 * ladder.tail;
    }
    any_diverged = any_diverged || ladder.diverged;
  }

  QuadratureEstimate& total = report.total;
  total.value = report.hexagon.value;
  total.error_bound = report.hexagon.error_bound;
  for (const auto& c : report.corners) {
    total.value += c.partial + c.tail;
    total.error_bound += c.error_bound;
  }
  // history[k] is the area of the hexagon cut at s = 2^-(k+1).
  double running = report.hexagon.value;
  total.history.push_back(running);
  for (int level = 0; level + 1 < levels; ++level) {
    for (const auto& c : report.corners) {
      if (static_cast<std::size_t>(level) < c.increments.size()) running += c.increments[level];
    }
    total.history.push_back(running);
  }
  total.depth = levels;
  total.diverged = any_diverged;
  total.cells = cells;
  return report;
}

QuadratureEstimate ideal_triangle_area(const ConvexDomain& domain, const IdealTriangle& t,
                                       const TriangleAreaOptions& options) {
  return ideal_triangle_area_report(domain, t, options).total;
}

std::vector<double> default_focus_params(const ConvexDomain& domain) {
  std::vector<double> out;
  if (domain.kind() == DomainKind::Polygon) {
    const auto& poly = std::get<PolygonShape>(domain.shape());
    const double total = poly.cumulative_length.back();
    for (std::size_t i = 0; i + 1 < poly.cumulative_length.size(); ++i) {
      out.push_back(poly.cumulative_length[i] / total);
    }
  } else if (domain.kind() == DomainKind::PBall) {
    for (int k = 0; k < 4; ++k) out.push_back(std::numbers::pi / 4.0 + k * std::numbers::pi / 2.0);
  }
  return out;
}

SupAreaResult sup_area_search(const ConvexDomain& domain, const TriangleSamplerConfig& sampler,
                              const TriangleAreaOptions& options) {
  if (sampler.budget < 1) throw GeometryError(ErrorKind::InvalidArgument, "budget must be at least 1");
  RandomStream rng(sampler.seed);
  const double period = domain.param_period();
  auto draw = [&](std::size_t stratum, bool stratified) {
    if (!sampler.focus_params.empty() && rng.uniform() < sampler.focus_probability) {
      const double base = sampler.focus_params[rng.index(sampler.focus_params.size())];
      if (rng.uniform() < 0.5) return base;
      return base + period * sampler.focus_jitter * (2.0 * rng.uniform() - 1.0);
    }
    if (stratified) return period * (static_cast<double>(stratum) + rng.uniform()) / static_cast<double>(sampler.budget);
    return period * rng.uniform();
  };

  SupAreaResult out;
  bool have_best = false;
  // Triples of distinct focus parameters come first, then random draws.
  std::vector<std::array<double, 3>> exact;
  if (sampler.focus_probability > 0.0) {
    const auto& f = sampler.focus_params;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = i + 1; j < f.size(); ++j) {
        for (std::size_t k = j + 1; k < f.size(); ++k) exact.push_back({f[i], f[j], f[k]});
      }
    }
  }
  for (std::size_t n = 0; n < exact.size() + sampler.budget; ++n) {
    const bool fixed = n < exact.size();
    const std::size_t i = fixed ? 0 : n - exact.size();
    const double t1 = fixed ? exact[n][0] : draw(i, true);
    const double t2 = fixed ? exact[n][1] : draw(i, false);
    const double t3 = fixed ? exact[n][2] : draw(i, false);
    IdealTriangle t;
    try {
      t = make_ideal_triangle(domain, t1, t2, t3);
    } catch (const GeometryError& e) {
      if (e.kind() != ErrorKind::DegenerateVertices) throw;
      ++out.invalid;
      continue;
    }
    if (!t.valid) {
      ++out.invalid;
      continue;
    }
    const QuadratureEstimate q = ideal_triangle_area(domain, t, options);
    ++out.evaluated;
    if (q.diverged) {
      ++out.diverged;
      out.diverged_values.push_back(q.value);
    }
    if (!have_best || q.value > out.best_area.value) {
      out.best = t;
      out.best_area = q;
      have_best = true;
    }
  }
  return out;
}

}  // namespace hilbert
