#include "hilbert/convex_domain.hpp"

#include "hilbert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hilbert {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// ---------------------------------------------------------------- ellipse

Vec2 ellipse_local(const EllipseShape& e, const Vec2& v) {
  const Vec2 r = rotate(v, -e.rotation);
  return {r.x / e.semi_a, r.y / e.semi_b};
}

double ellipse_level(const EllipseShape& e, const Point2& p) {
  return norm(ellipse_local(e, p - e.center)) - 1.0;
}

// Roots of |w + t d|^2 = 1 with |w| < 1, written to avoid cancellation.
std::pair<double, double> ellipse_exits(const EllipseShape& e, const Point2& p, const Vec2& u) {
  const Vec2 w = ellipse_local(e, p - e.center);
  const Vec2 d = ellipse_local(e, u);
  const double a = dot(d, d);
  const double b = dot(w, d);
  const double c = (w.x - 1.0) * (w.x + 1.0) + w.y * w.y;
  const double disc = std::sqrt(std::max(0.0, b * b - a * c));
  if (b <= 0.0) {
    const double plus = (-b + disc) / a;
    return {plus, -c / (a * plus)};
  }
  const double minus = (b + disc) / a;
  return {-c / (a * minus), minus};
}

// ---------------------------------------------------------------- p-ball

double pnorm(const Vec2& w, double p) {
  const double ax = std::abs(w.x);
  const double ay = std::abs(w.y);
  const double m = std::max(ax, ay);
  if (m == 0.0) return 0.0;
  return m * std::pow(std::pow(ax / m, p) + std::pow(ay / m, p), 1.0 / p);
}

// Gradient of the p-norm at w != 0.
Vec2 pnorm_gradient(const Vec2& w, double p) {
  const double n = pnorm(w, p);
  auto comp = [&](double c) {
    const double r = std::abs(c) / n;
    return (c > 0 ? 1.0 : (c < 0 ? -1.0 : 0.0)) * std::pow(r, p - 1.0);
  };
  return {comp(w.x), comp(w.y)};
}

// Exit parameter of the ray z + t d from the open box (-1, 1)^2.
double box_exit(const Vec2& z, const Vec2& d) {
  double t = kInf;
  if (d.x > 0) t = std::min(t, (1.0 - z.x) / d.x);
  if (d.x < 0) t = std::min(t, (-1.0 - z.x) / d.x);
  if (d.y > 0) t = std::min(t, (1.0 - z.y) / d.y);
  if (d.y < 0) t = std::min(t, (-1.0 - z.y) / d.y);
  return t;
}

// Root of the convex function g(t) = |x(t)|^p + |y(t)|^p - 1, (x, y) = z + t d,
// on (0, box exit]; g(0) < 0. Bracketed by the enclosing box, then Newton
// iterations from the right (monotone for a convex function), with bisection
// as fallback.
double pball_exit(double p, const Vec2& z, const Vec2& d) {
  auto g = [&](double t, double* slope) {
    const Vec2 w = z + t * d;
    const double ax = std::abs(w.x);
    const double ay = std::abs(w.y);
    const double px = std::pow(ax, p);
    const double py = std::pow(ay, p);
    if (slope) {
      const double sx = ax > 0.0 ? std::copysign(px / ax, w.x) : 0.0;
      const double sy = ay > 0.0 ? std::copysign(py / ay, w.y) : 0.0;
      *slope = p * (sx * d.x + sy * d.y);
    }
    return px + py - 1.0;
  };
  double lo = 0.0;
  double hi = box_exit(z, d);
  double t = hi;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    double slope = 0.0;
    const double gt = g(t, &slope);
    if (gt <= 0.0) {
      lo = std::max(lo, t);
      if (gt == 0.0) return t;
    } else {
      hi = std::min(hi, t);
    }
    double next = (slope > 0.0) ? t - gt / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 4.0 * eps * std::max(1.0, t) || hi - lo <= 4.0 * eps * std::max(1.0, hi)) {
      return (g(next, nullptr) > 0.0) ? std::min(next, hi) : next;
    }
    t = next;
  }
  throw GeometryError(ErrorKind::NoConvergence, "p-ball boundary root finder exhausted iterations");
}

double pball_level(const PBallShape& b, const Point2& q) {
  return pnorm((q - b.center) / b.scale, b.p) - 1.0;
}

std::pair<double, double> pball_exits(const PBallShape& b, const Point2& q, const Vec2& u) {
  const Vec2 z = (q - b.center) / b.scale;
  const Vec2 d = u / b.scale;
  return {pball_exit(b.p, z, d), pball_exit(b.p, z, -d)};
}

// ---------------------------------------------------------------- polygon

double polygon_level(const PolygonShape& poly, const Point2& p) {
  double level = -kInf;
  for (std::size_t i = 0; i < poly.normals.size(); ++i) {
    level = std::max(level, dot(poly.normals[i], p) - poly.offsets[i]);
  }
  return level;
}

double polygon_exit(const PolygonShape& poly, const Point2& p, const Vec2& u) {
  double t = kInf;
  for (std::size_t i = 0; i < poly.normals.size(); ++i) {
    const double nu = dot(poly.normals[i], u);
    if (nu > 0.0) t = std::min(t, (poly.offsets[i] - dot(poly.normals[i], p)) / nu);
  }
  return t;
}

// ---------------------------------------------------------------- power cap

double power_cap_level(const PowerCapShape& s, const Point2& p) {
  return std::max(p.y - 1.0, std::pow(std::abs(p.x), s.alpha) - p.y);
}

double power_cap_exit(const PowerCapShape& s, const Point2& p, const Vec2& u) {
  const double t_top = (u.y > 0.0) ? (1.0 - p.y) / u.y : kInf;
  auto g = [&](double t) { return std::pow(std::abs(p.x + t * u.x), s.alpha) - (p.y + t * u.y); };
  double hi = std::isfinite(t_top) ? t_top : 3.0;
  if (g(hi) < 0.0) return t_top;
  double lo = 0.0;
  double t = hi;
  for (int it = 0; it < 200; ++it) {
    const double x = p.x + t * u.x;
    const double gt = g(t);
    if (gt <= 0.0) {
      lo = std::max(lo, t);
      if (gt == 0.0) return t;
    } else {
      hi = std::min(hi, t);
    }
    const double sgn = (x > 0) ? 1.0 : (x < 0 ? -1.0 : 0.0);
    const double slope = s.alpha * std::pow(std::abs(x), s.alpha - 1.0) * sgn * u.x - u.y;
    double next = (slope > 0.0) ? t - gt / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
      return next;
    }
    t = next;
  }
  throw GeometryError(ErrorKind::NoConvergence, "power-cap boundary root finder exhausted iterations");
}

Point2 ray_boundary_point(const ConvexDomain& d, double angle) {
  const Point2 c = d.center();
  const Vec2 u = unit_vector(angle);
  return c + d.exit_distance(c, u) * u;
}

Line2 oriented(Line2 line, const ConvexDomain& d) {
  return line.signed_distance(d.center()) > 0.0 ? line.flipped() : line;
}

}  // namespace

ConvexDomain ConvexDomain::ellipse(Point2 center, double semi_a, double semi_b, double rotation) {
  if (!(semi_a > 0.0) || !(semi_b > 0.0) || !is_finite(center)) {
    throw GeometryError(ErrorKind::InvalidArgument, "ellipse semi-axes must be positive");
  }
  return ConvexDomain(EllipseShape{center, semi_a, semi_b, rotation});
}

ConvexDomain ConvexDomain::disk(Point2 center, double radius) {
  return ellipse(center, radius, radius, 0.0);
}

ConvexDomain ConvexDomain::pball(double p, Point2 center, double scale) {
  if (!(p >= 1.0) || !std::isfinite(p) || !(scale > 0.0)) {
    throw GeometryError(ErrorKind::InvalidArgument, "p-ball needs p >= 1 and positive scale");
  }
  return ConvexDomain(PBallShape{p, center, scale});
}

ConvexDomain ConvexDomain::polygon(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw GeometryError(ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) area2 += cross(vertices[i], vertices[(i + 1) % n]);
  if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());
  if (std::abs(area2) <= 0.0) throw GeometryError(ErrorKind::InvalidArgument, "polygon has zero area");

  PolygonShape poly;
  poly.vertices = std::move(vertices);
  double scale = 0.0;
  for (const auto& v : poly.vertices) scale = std::max(scale, norm(v));
  double length = 0.0;
  poly.cumulative_length.push_back(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly.vertices[i];
    const Point2& b = poly.vertices[(i + 1) % n];
    const Point2& c = poly.vertices[(i + 2) % n];
    const Vec2 e = b - a;
    if (norm(e) <= 1e-14 * std::max(1.0, scale)) {
      throw GeometryError(ErrorKind::InvalidArgument, "polygon has repeated vertices");
    }
    const double turn = cross(e, c - b);
    if (turn < -1e-12 * norm(e) * norm(c - b)) {
      throw GeometryError(ErrorKind::InvalidArgument, "polygon is not convex");
    }
    if (turn <= 1e-12 * norm(e) * norm(c - b)) poly.strictly_convex_position = false;
    const Vec2 normal = normalized(Vec2{e.y, -e.x});
    poly.normals.push_back(normal);
    poly.offsets.push_back(dot(normal, a));
    length += norm(e);
    poly.cumulative_length.push_back(length);
  }
  return ConvexDomain(std::move(poly));
}

ConvexDomain ConvexDomain::regular_polygon(int n, double radius, double phase, Point2 center) {
  if (n < 3) throw GeometryError(ErrorKind::InvalidArgument, "regular polygon needs n >= 3");
  std::vector<Point2> v;
  for (int i = 0; i < n; ++i) v.push_back(center + radius * unit_vector(phase + kTwoPi * i / n));
  return polygon(std::move(v));
}

ConvexDomain ConvexDomain::unit_square() { return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

ConvexDomain ConvexDomain::power_cap(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw GeometryError(ErrorKind::InvalidArgument, "power cap needs alpha > 1");
  }
  return ConvexDomain(PowerCapShape{alpha});
}

ConvexDomain ConvexDomain::projective_image(const ConvexDomain& inner, const ProjectiveMap& map) {
  // The line sent to infinity must miss the closure of the inner domain, i.e.
  // the homogeneous weight keeps one strict sign on it.
  ProjectiveMap h = map;
  if (h.weight(inner.center()) < 0.0) h = ProjectiveMap(-map.matrix());
  const auto samples = inner.boundary_samples(4096);
  double wmin = kInf;
  double wmax = 0.0;
  for (const auto& b : samples) {
    const double w = h.weight(b);
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, std::abs(w));
  }
  if (inner.kind() == DomainKind::Polygon) {
    for (const auto& v : std::get<PolygonShape>(inner.shape()).vertices) wmin = std::min(wmin, h.weight(v));
  }
  if (!(wmin > 1e-9 * wmax)) {
    throw GeometryError(ErrorKind::ImproperImage,
                        "projective image is unbounded: the line sent to infinity meets the closure");
  }

  ProjectiveShape s{std::make_shared<const ConvexDomain>(inner), h, h.inverse(), {}};
  Point2 lo{kInf, kInf};
  Point2 hi{-kInf, -kInf};
  for (std::size_t i = 0; i < samples.size(); i += 4) {
    const Point2 q = h.apply(samples[i]);
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  const Vec2 pad = 0.02 * (hi - lo);
  s.box = {lo - pad, hi + pad};
  return ConvexDomain(std::move(s));
}

ConvexDomain projective_image(const ConvexDomain& domain, const ProjectiveMap& map) {
  return ConvexDomain::projective_image(domain, map);
}

DomainKind ConvexDomain::kind() const {
  return std::visit(Overloaded{
                        [](const EllipseShape&) { return DomainKind::Ellipse; },
                        [](const PBallShape&) { return DomainKind::PBall; },
                        [](const PolygonShape&) { return DomainKind::Polygon; },
                        [](const PowerCapShape&) { return DomainKind::PowerCap; },
                        [](const ProjectiveShape&) { return DomainKind::Projective; },
                    },
                    *shape_);
}

std::string ConvexDomain::label() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const EllipseShape& e) {
                   os << (e.semi_a == e.semi_b ? "disk" : "ellipse") << "(" << e.semi_a << "," << e.semi_b << ")";
                 },
                 [&](const PBallShape& b) { os << "pball(p=" << b.p << ")"; },
                 [&](const PolygonShape& poly) { os << "polygon(n=" << poly.vertices.size() << ")"; },
                 [&](const PowerCapShape& s) { os << "power_cap(alpha=" << s.alpha << ")"; },
                 [&](const ProjectiveShape& s) { os << "projective(" << s.inner->label() << ")"; },
             },
             *shape_);
  return os.str();
}

double ConvexDomain::level(const Point2& p) const {
  return std::visit(Overloaded{
                        [&](const EllipseShape& e) { return ellipse_level(e, p); },
                        [&](const PBallShape& b) { return pball_level(b, p); },
                        [&](const PolygonShape& poly) { return polygon_level(poly, p); },
                        [&](const PowerCapShape& s) { return power_cap_level(s, p); },
                        [&](const ProjectiveShape& s) {
                          const auto q = s.inverse.try_apply(p);
                          return q ? s.inner->level(*q) : 1.0;
                        },
                    },
                    *shape_);
}

std::pair<double, double> ConvexDomain::exit_distances(const Point2& p, const Vec2& u) const {
  return std::visit(Overloaded{
                        [&](const EllipseShape& e) { return ellipse_exits(e, p, u); },
                        [&](const PBallShape& b) { return pball_exits(b, p, u); },
                        [&](const PolygonShape& poly) {
                          return std::pair{polygon_exit(poly, p, u), polygon_exit(poly, p, -u)};
                        },
                        [&](const PowerCapShape& s) {
                          return std::pair{power_cap_exit(s, p, u), power_cap_exit(s, p, -u)};
                        },
                        [&](const ProjectiveShape&) {
                          const Chord c = chord(p, u);
                          return std::pair{distance(c.p_plus, p), distance(c.p_minus, p)};
                        },
                    },
                    *shape_);
}

Chord ConvexDomain::chord(const Point2& p, const Vec2& v) const {
  if (!contains(p)) throw GeometryError(ErrorKind::PointNotInterior, "point not interior");
  const double len = norm(v);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw GeometryError(ErrorKind::InvalidArgument, "chord direction must be nonzero");
  }
  const Vec2 u = v / len;
  if (const auto* s = std::get_if<ProjectiveShape>(shape_.get())) {
    // Lines map to lines: pull the query back, solve in the inner domain and
    // push the endpoints forward. Orientation is preserved because the closed
    // chord never meets the line sent to infinity.
    const Point2 q = s->inverse.apply(p);
    const Vec2 d = normalized(s->inverse.push_forward(p, u));
    const auto [tp, tm] = s->inner->exit_distances(q, d);
    return {s->map.apply(q - tm * d), s->map.apply(q + tp * d)};
  }
  const auto [tp, tm] = exit_distances(p, u);
  return {p - tm * u, p + tp * u};
}

Line2 ConvexDomain::supporting_line(const Point2& b) const {
  const double tol = boundary_tolerance();
  if (!(std::abs(level(b)) <= tol)) {
    throw GeometryError(ErrorKind::NotOnBoundary, "point is not on the boundary");
  }
  return std::visit(
      Overloaded{
          [&](const EllipseShape& e) {
            const Vec2 w = ellipse_local(e, b - e.center);
            const Vec2 n_local{w.x / e.semi_a, w.y / e.semi_b};
            return Line2::through(b, rotate(n_local, e.rotation));
          },
          [&](const PBallShape& ball) {
            return Line2::through(b, pnorm_gradient((b - ball.center) / ball.scale, ball.p));
          },
          [&](const PolygonShape& poly) {
            // Edge line on an edge interior, bisector of the normal cone at a corner.
            Vec2 n{0, 0};
            for (std::size_t i = 0; i < poly.normals.size(); ++i) {
              if (std::abs(dot(poly.normals[i], b) - poly.offsets[i]) <= tol) n += poly.normals[i];
            }
            return Line2::through(b, n);
          },
          [&](const PowerCapShape& s) {
            const double curve = std::pow(std::abs(b.x), s.alpha) - b.y;
            const double top = b.y - 1.0;
            Vec2 n{0, 0};
            if (std::abs(top) <= tol) n += Vec2{0, 1};
            if (std::abs(curve) <= tol) {
              const double sgn = b.x > 0 ? 1.0 : (b.x < 0 ? -1.0 : 0.0);
              n += normalized(Vec2{s.alpha * std::pow(std::abs(b.x), s.alpha - 1.0) * sgn, -1.0});
            }
            return Line2::through(b, n);
          },
          [&](const ProjectiveShape& s) {
            const Line2 inner = s.inner->supporting_line(s.inverse.apply(b));
            return oriented(s.map.apply(inner), *this);
          },
      },
      *shape_);
}

double ConvexDomain::param_period() const {
  switch (kind()) {
    case DomainKind::Polygon: return 1.0;
    case DomainKind::Projective: return std::get<ProjectiveShape>(*shape_).inner->param_period();
    default: return kTwoPi;
  }
}

Point2 ConvexDomain::boundary_point(double param) const {
  return std::visit(Overloaded{
                        [&](const PolygonShape& poly) {
                          const double total = poly.cumulative_length.back();
                          double s = param - std::floor(param);
                          const double target = s * total;
                          auto it = std::upper_bound(poly.cumulative_length.begin(),
                                                     poly.cumulative_length.end(), target);
                          const std::size_t i = std::min<std::size_t>(
                              static_cast<std::size_t>(it - poly.cumulative_length.begin()) - 1,
                              poly.vertices.size() - 1);
                          const Point2& a = poly.vertices[i];
                          const Point2& b = poly.vertices[(i + 1) % poly.vertices.size()];
                          const double seg = poly.cumulative_length[i + 1] - poly.cumulative_length[i];
                          return lerp(a, b, (target - poly.cumulative_length[i]) / seg);
                        },
                        [&](const ProjectiveShape& s) { return s.map.apply(s.inner->boundary_point(param)); },
                        [&](const auto&) { return ray_boundary_point(*this, param); },
                    },
                    *shape_);
}

std::vector<Point2> ConvexDomain::boundary_samples(int n) const {
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n));
  const double period = param_period();
  for (int i = 0; i < n; ++i) out.push_back(boundary_point(period * i / n));
  return out;
}

Point2 ConvexDomain::center() const {
  return std::visit(Overloaded{
                        [](const EllipseShape& e) { return e.center; },
                        [](const PBallShape& b) { return b.center; },
                        [](const PolygonShape& poly) {
                          Point2 c{0, 0};
                          for (const auto& v : poly.vertices) c += v;
                          return c / static_cast<double>(poly.vertices.size());
                        },
                        [](const PowerCapShape&) { return Point2{0.0, 0.5}; },
                        [](const ProjectiveShape& s) { return s.map.apply(s.inner->center()); },
                    },
                    *shape_);
}

BoundingBox ConvexDomain::bounding_box() const {
  return std::visit(Overloaded{
                        [](const EllipseShape& e) {
                          const double c = std::cos(e.rotation);
                          const double s = std::sin(e.rotation);
                          const double hx = std::hypot(e.semi_a * c, e.semi_b * s);
                          const double hy = std::hypot(e.semi_a * s, e.semi_b * c);
                          return BoundingBox{e.center - Vec2{hx, hy}, e.center + Vec2{hx, hy}};
                        },
                        [](const PBallShape& b) {
                          return BoundingBox{b.center - Vec2{b.scale, b.scale}, b.center + Vec2{b.scale, b.scale}};
                        },
                        [](const PolygonShape& poly) {
                          Point2 lo{kInf, kInf};
                          Point2 hi{-kInf, -kInf};
                          for (const auto& v : poly.vertices) {
                            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
                            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
                          }
                          return BoundingBox{lo, hi};
                        },
                        [](const PowerCapShape&) { return BoundingBox{{-1.0, 0.0}, {1.0, 1.0}}; },
                        [](const ProjectiveShape& s) { return s.box; },
                    },
                    *shape_);
}

bool ConvexDomain::is_strictly_convex() const {
  return std::visit(Overloaded{
                        [](const EllipseShape&) { return true; },
                        [](const PBallShape& b) { return b.p > 1.0; },
                        [](const PolygonShape&) { return false; },
                        [](const PowerCapShape&) { return false; },
                        [](const ProjectiveShape& s) { return s.inner->is_strictly_convex(); },
                    },
                    *shape_);
}

double ConvexDomain::boundary_tolerance() const { return 1e-7; }

}  // namespace hilbert
