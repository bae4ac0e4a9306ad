#include "hilbert/measure.hpp"

#include "hilbert/errors.hpp"
#include "hilbert/metric.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace hilbert {
namespace {

constexpr double kPi = 3.141592653589793;

// ---------------------------------------------------------------- unit ball

struct Whitening {
  Eigen::Matrix2d inverse = Eigen::Matrix2d::Identity();  // A^{-1}
  double det = 1.0;                                       // det A
};

// Least-squares fit of F(u)^2 = q11 c^2 + 2 q12 c s + q22 s^2 over directions
// sampled in the current whitened frame, composed into w. Returns true once
// the frame is round.
bool refit(const ConvexDomain& domain, const Point2& p, int n, Whitening& w) {
  Eigen::MatrixXd m(n, 3);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const double phi = kPi * i / n;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const Eigen::Vector2d u = w.inverse * Eigen::Vector2d(c, s);
    const double f = finsler_norm(domain, p, {u(0), u(1)});
    m.row(i) << c * c, 2.0 * c * s, s * s;
    rhs(i) = f * f;
  }
  const Eigen::Vector3d q = m.colPivHouseholderQr().solve(rhs);
  Eigen::Matrix2d Q;
  Q << q(0), q(1), q(1), q(2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(Q);
  Eigen::Vector2d ev = eig.eigenvalues();
  if (!(ev(1) > 0.0) || !std::isfinite(ev(1))) return false;
  // A very eccentric ball makes the fit lose the small eigenvalue; whiten
  // partially and let the next fit, in a rounder frame, recover it.
  const bool clamped = !(ev(0) > 1e-10 * ev(1));
  if (clamped) ev(0) = 1e-10 * ev(1);
  const Eigen::Matrix2d V = eig.eigenvectors();
  const Eigen::Vector2d root = ev.cwiseSqrt();
  w.inverse = w.inverse * (V * root.cwiseInverse().asDiagonal() * V.transpose());
  w.det *= root(0) * root(1);
  return !clamped && ev(1) < 1.5 * ev(0);
}

// Repeated fits: near the boundary a single fit from uniformly spaced
// directions misses the thin axis of the ball.
Whitening fit_whitening(const ConvexDomain& domain, const Point2& p, int n) {
  Whitening w;
  for (int it = 0; it < 10; ++it) {
    Whitening next = w;
    const bool round = refit(domain, p, n, next);
    if (!std::isfinite(next.det) || next.det <= 0.0) break;
    w = next;
    if (round) break;
  }
  return w;
}

template <class G>
double adaptive_simpson(G& g, double a, double b, double fa, double fm, double fb, double whole, double eps,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= std::max(15.0 * eps, 1e-14 * std::abs(left + right))) return left + right + delta / 15.0;
  return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

// For a polygon F(p, .) is piecewise linear, with breaks where the chord
// through p meets a vertex, so the ball is a polygon and each sector between
// consecutive breaks is a triangle.
double polygon_unit_ball_area(const ConvexDomain& domain, const PolygonShape& poly, const Point2& p) {
  std::vector<double> breaks;
  breaks.reserve(poly.vertices.size());
  for (const auto& v : poly.vertices) {
    double a = std::atan2(v.y - p.y, v.x - p.x);
    if (a < 0.0) a += kPi;
    if (a >= kPi) a -= kPi;
    breaks.push_back(a);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(breaks.front() + kPi);
  double half = 0.0;
  double r0 = 1.0 / finsler_norm(domain, p, unit_vector(breaks[0]));
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double r1 = 1.0 / finsler_norm(domain, p, unit_vector(breaks[i]));
    half += 0.5 * r0 * r1 * std::sin(breaks[i] - breaks[i - 1]);
    r0 = r1;
  }
  return 2.0 * half;
}

}  // namespace

double unit_ball_area(const ConvexDomain& domain, const Point2& p, const UnitBallOptions& options) {
  if (options.n_dirs < 2 || options.n_dirs % 2 != 0) {
    throw GeometryError(ErrorKind::InvalidArgument, "n_dirs must be a positive even integer");
  }
  if (!domain.contains(p)) throw GeometryError(ErrorKind::PointNotInterior, "point not interior");
  if (const auto* poly = std::get_if<PolygonShape>(&domain.shape())) {
    return polygon_unit_ball_area(domain, *poly, p);
  }
  if (const auto* proj = std::get_if<ProjectiveShape>(&domain.shape())) {
    // The ball at H(x) is dH(x) applied to the ball at x; det dH = det M / w^3.
    const Point2 x = proj->inverse.apply(p);
    const double w = proj->map.weight(x);
    const double jac = std::abs(proj->map.matrix().determinant() / (w * w * w));
    return unit_ball_area(*proj->inner, x, options) * jac;
  }
  const int n = options.n_dirs;
  const double h = kPi / n;

  const Whitening w = options.whiten ? fit_whitening(domain, p, n) : Whitening{};
  std::vector<double> angles(n + 1);
  std::vector<double> values(n + 1);
  for (int i = 0; i <= n; ++i) angles[i] = i * h;
  // r(phi)^2 for the whitened ball; the ball is symmetric, so [0, pi] suffices.
  auto g = [&](double phi) {
    const Eigen::Vector2d u = w.inverse * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    const double f = finsler_norm(domain, p, {u(0), u(1)});
    return 1.0 / (f * f);
  };
  for (int i = 0; i <= n; ++i) values[i] = (i == n) ? values[0] : g(angles[i]);

  double area = 0.0;
  for (int i = 0; i < n; i += 2) {
    area += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
  }
  if (options.adaptive) {
    const double eps = options.rel_tol * area / (n / 2);
    double refined = 0.0;
    for (int i = 0; i < n; i += 2) {
      const double whole = h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
      refined += adaptive_simpson(g, angles[i], angles[i + 2], values[i], values[i + 1], values[i + 2], whole,
                                  eps, 16);
    }
    area = refined;
  }
  return area / w.det;
}

double unit_ball_area(const ConvexDomain& domain, const Point2& p, int n_dirs) {
  if (n_dirs < 16) throw GeometryError(ErrorKind::InvalidArgument, "n_dirs must be at least 16");
  UnitBallOptions options;
  options.n_dirs = n_dirs + (n_dirs % 2);
  return unit_ball_area(domain, p, options);
}

double density(const ConvexDomain& domain, const Point2& p, const UnitBallOptions& options) {
  return kPi / unit_ball_area(domain, p, options);
}

double density(const ConvexDomain& domain, const Point2& p) { return density(domain, p, UnitBallOptions{}); }

double hilbert_polar_radius(double t_plus, double t_minus, double rho) {
  const double em1 = std::expm1(2.0 * rho);
  return t_minus * t_plus * em1 / (t_plus + (em1 + 1.0) * t_minus);
}

// ---------------------------------------------------------------- quadrature

namespace {

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = 0.5 * (1.0 - z);
    r.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

const GaussRule& gauss6() {
  static const GaussRule r = gauss_legendre(6);
  return r;
}
const GaussRule& gauss5() {
  static const GaussRule r = gauss_legendre(5);
  return r;
}

// Seven-point degree-5 rule on the reference triangle (barycentric, weights sum to 1).
struct BaryNode {
  double l0, l1, l2, w;
};
const std::array<BaryNode, 7>& radon7() {
  static const std::array<BaryNode, 7> nodes = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0;
    const double a2 = (6.0 + s) / 21.0;
    const double w1 = (155.0 - s) / 1200.0;
    const double w2 = (155.0 + s) / 1200.0;
    return std::array<BaryNode, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40},
                                    {a1, a1, 1 - 2 * a1, w1},
                                    {a1, 1 - 2 * a1, a1, w1},
                                    {1 - 2 * a1, a1, a1, w1},
                                    {a2, a2, 1 - 2 * a2, w2},
                                    {a2, 1 - 2 * a2, a2, w2},
                                    {1 - 2 * a2, a2, a2, w2}}};
  }();
  return nodes;
}

constexpr int kGrading = 3;
constexpr double kSingularLevel = -1e-12;

struct Tri {
  std::array<Point2, 3> v;
};

struct Rect {
  double theta0, theta1, rho0, rho1;
};

// Generic refinement engine over cells with 4-way splits.
template <class Cell, class Rule, class Split, class Forced>
QuadratureEstimate refine(const std::vector<Cell>& roots, const QuadratureOptions& opt, Rule&& rule,
                          Split&& split, Forced&& forced) {
  QuadratureEstimate out;
  if (roots.empty()) {
    out.history = {0.0};
    return out;
  }

  if (opt.uniform_depth >= 0) {
    std::vector<Cell> level = roots;
    for (int d = 0;; ++d) {
      double total = 0.0;
      for (const auto& c : level) total += rule(c);
      out.history.push_back(total);
      out.cells += level.size();
      if (d == opt.uniform_depth) break;
      std::vector<Cell> next;
      next.reserve(4 * level.size());
      for (const auto& c : level) {
        for (const auto& k : split(c)) next.push_back(k);
      }
      level = std::move(next);
    }
    out.depth = opt.uniform_depth;
    out.value = out.history.back();
    const std::size_t n = out.history.size();
    out.error_bound = n >= 2 ? std::abs(out.history[n - 1] - out.history[n - 2]) : 0.0;
    out.diverged = n >= 2 && out.error_bound > opt.tol * out.value &&
                   out.history[n - 1] > (1.0 + opt.tol) * out.history[n - 2];
    return out;
  }

  struct Node {
    Cell cell;
    int depth;
    std::array<Cell, 4> children;
    std::array<double, 4> child_values;
    double contribution;
    double raw_error;
    bool forced;
    bool leaf = true;
  };
  std::vector<Node> nodes;
  double root_total = 0.0;

  auto make = [&](const Cell& c, int depth, double self) {
    Node n{c, depth, split(c), {}, 0.0, 0.0, forced(c)};
    for (int i = 0; i < 4; ++i) {
      n.child_values[i] = rule(n.children[i]);
      n.contribution += n.child_values[i];
    }
    n.raw_error = std::abs(self - n.contribution);
    out.cells += 5;
    nodes.push_back(n);
    return nodes.size() - 1;
  };

  using Key = std::pair<double, std::size_t>;  // (priority, -id ordering via comparator)
  auto cmp = [](const Key& a, const Key& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Key, std::vector<Key>, decltype(cmp)> queue(cmp);
  auto priority = [](const Node& n) {
    return n.forced ? std::numeric_limits<double>::infinity() : n.raw_error;
  };

  double total = 0.0;
  double error = 0.0;
  std::size_t forced_active = 0;
  for (const auto& c : roots) {
    const double self = rule(c);
    root_total += self;
    const std::size_t id = make(c, 0, self);
    total += nodes[id].contribution;
    error += nodes[id].raw_error;
    if (nodes[id].forced) ++forced_active;
    queue.push({priority(nodes[id]), id});
  }

  std::size_t refinements = 0;
  while (!queue.empty() && refinements < opt.max_refinements &&
         (error > opt.tol * total || forced_active > 0)) {
    const std::size_t id = queue.top().second;
    queue.pop();
    if (nodes[id].forced) --forced_active;
    if (nodes[id].depth + 2 > opt.max_depth) continue;  // frozen: children already at the cap
    ++refinements;
    nodes[id].leaf = false;
    total -= nodes[id].contribution;
    error -= nodes[id].raw_error;
    const int depth = nodes[id].depth + 1;
    for (int i = 0; i < 4; ++i) {
      const Cell c = nodes[id].children[i];
      const double self = nodes[id].child_values[i];
      const std::size_t k = make(c, depth, self);
      total += nodes[k].contribution;
      error += nodes[k].raw_error;
      if (nodes[k].forced) ++forced_active;
      queue.push({priority(nodes[k]), k});
    }
  }

  int max_depth = 0;
  for (const auto& n : nodes) max_depth = std::max(max_depth, n.depth);
  std::vector<double> all(max_depth + 1, 0.0);
  std::vector<double> leaves(max_depth + 1, 0.0);
  for (const auto& n : nodes) {
    all[n.depth] += n.contribution;
    if (n.leaf) leaves[n.depth] += n.contribution;
  }
  out.history.push_back(root_total);
  double leaf_prefix = 0.0;
  for (int level = 1; level <= max_depth + 1; ++level) {
    out.history.push_back(all[level - 1] + leaf_prefix);
    leaf_prefix += leaves[level - 1];
  }

  double sum = 0.0;
  double err = 0.0;
  for (const auto& n : nodes) {
    if (!n.leaf) continue;
    sum += n.contribution;
    err += n.raw_error;
  }
  out.value = sum;
  out.error_bound = err;
  out.depth = max_depth + 1;
  const std::size_t h = out.history.size();
  const bool converged = err <= opt.tol * sum;
  out.diverged = !converged && h >= 2 && out.history[h - 1] > (1.0 + opt.tol) * out.history[h - 2];
  return out;
}

std::vector<Point2> normalized_polygon(const ConvexDomain& domain, std::vector<Point2> v) {
  if (v.size() < 3) return {};
  double area2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) area2 += cross(v[i], v[(i + 1) % v.size()]);
  if (area2 < 0.0) std::reverse(v.begin(), v.end());
  if (std::abs(area2) == 0.0) return {};
  double scale = 1.0;
  for (const auto& p : v) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const Point2& c = v[(i + 2) % v.size()];
    if (cross(b - a, c - b) < -1e-12 * scale) {
      throw GeometryError(ErrorKind::InvalidArgument, "region polygon is not convex");
    }
  }
  const double tol = domain.boundary_tolerance();
  for (const auto& p : v) {
    if (!is_finite(p) || domain.level(p) > tol) {
      throw GeometryError(ErrorKind::RegionOutsideDomain, "region vertex outside the domain");
    }
  }
  return v;
}

QuadratureEstimate polygon_area(const ConvexDomain& domain, const PolygonRegion& region,
                                const QuadratureOptions& opt) {
  const std::vector<Point2> v = normalized_polygon(domain, region.vertices);
  std::vector<Tri> roots;
  if (!v.empty()) {
    Point2 centroid;
    for (const auto& p : v) centroid = centroid + p;
    centroid = centroid / static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Tri t{{centroid, v[i], v[(i + 1) % v.size()]}};
      if (std::abs(cross(t.v[1] - t.v[0], t.v[2] - t.v[0])) > 0.0) roots.push_back(t);
    }
  }

  auto singular = [&](const Point2& p) { return domain.level(p) >= kSingularLevel; };
  auto h = [&](const Point2& p) {
    if (!domain.contains(p)) return 0.0;
    return density(domain, p, opt.unit_ball);
  };
  const auto& g = gauss6();

  auto rule = [&](const Tri& t) {
    const double area2 = std::abs(cross(t.v[1] - t.v[0], t.v[2] - t.v[0]));
    int s = -1;
    for (int i = 0; i < 3; ++i) {
      if (singular(t.v[i])) {
        s = i;
        break;
      }
    }
    double sum = 0.0;
    if (s < 0) {
      for (const auto& n : radon7()) sum += n.w * h(n.l0 * t.v[0] + n.l1 * t.v[1] + n.l2 * t.v[2]);
      return 0.5 * area2 * sum;
    }
    // Collapsed rule P = v + u^m ((1 - w)(b - v) + w (c - v)), Jacobian m u^{2m-1} |2A|.
    const Point2& a = t.v[s];
    const Point2& b = t.v[(s + 1) % 3];
    const Point2& c = t.v[(s + 2) % 3];
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double u = g.x[i];
      const double um = std::pow(u, kGrading);
      const double jac = kGrading * std::pow(u, 2 * kGrading - 1);
      for (std::size_t j = 0; j < g.x.size(); ++j) {
        const double w = g.x[j];
        const Point2 p = a + um * ((1.0 - w) * (b - a) + w * (c - a));
        sum += g.w[i] * g.w[j] * jac * h(p);
      }
    }
    return area2 * sum;
  };
  auto split = [](const Tri& t) {
    const Point2 ab = lerp(t.v[0], t.v[1], 0.5);
    const Point2 bc = lerp(t.v[1], t.v[2], 0.5);
    const Point2 ca = lerp(t.v[2], t.v[0], 0.5);
    return std::array<Tri, 4>{Tri{{t.v[0], ab, ca}}, Tri{{ab, t.v[1], bc}}, Tri{{ca, bc, t.v[2]}},
                              Tri{{bc, ca, ab}}};
  };
  auto forced = [&](const Tri& t) {
    int n = 0;
    for (const auto& p : t.v) n += singular(p) ? 1 : 0;
    return n >= 2;
  };
  return refine(roots, opt, rule, split, forced);
}

QuadratureEstimate metric_ball_area(const ConvexDomain& domain, const BallRegion& ball, const QuadratureOptions& opt) {
  if (!domain.contains(ball.center)) throw GeometryError(ErrorKind::PointNotInterior, "point not interior");
  if (!(ball.radius >= 0.0) || !std::isfinite(ball.radius)) {
    throw GeometryError(ErrorKind::InvalidArgument, "ball radius must be finite and nonnegative");
  }
  std::vector<Rect> roots;
  if (ball.radius > 0.0) {
    constexpr int kSectors = 16;
    for (int i = 0; i < kSectors; ++i) {
      roots.push_back({2 * kPi * i / kSectors, 2 * kPi * (i + 1) / kSectors, 0.0, ball.radius});
    }
  }
  const auto& g = gauss5();
  // Hilbert-polar coordinates around the center, with angles taken in the
  // whitened frame of the unit ball at the center so that the integrand stays
  // smooth in the angle even when the center is near the boundary.
  const Whitening white = fit_whitening(domain, ball.center, opt.unit_ball.n_dirs);
  const double det_inv = white.inverse.determinant();
  auto rule = [&](const Rect& r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double phi = r.theta0 + g.x[i] * (r.theta1 - r.theta0);
      const Eigen::Vector2d e = white.inverse * Eigen::Vector2d(std::cos(phi), std::sin(phi));
      const double len = e.norm();
      const Vec2 u{e(0) / len, e(1) / len};
      const double dtheta = std::abs(det_inv) / (len * len);
      const auto [tp, tm] = domain.exit_distances(ball.center, u);
      for (std::size_t j = 0; j < g.x.size(); ++j) {
        const double rho = r.rho0 + g.x[j] * (r.rho1 - r.rho0);
        const double ex = std::exp(2.0 * rho);
        const double t = hilbert_polar_radius(tp, tm, rho);
        const double denom = tp + ex * tm;
        const double dt = 2.0 * ex * tm * tp * (tp + tm) / (denom * denom);
        const Point2 p = ball.center + t * u;
        if (!domain.contains(p)) continue;
        sum += g.w[i] * g.w[j] * density(domain, p, opt.unit_ball) * t * dt * dtheta;
      }
    }
    return sum * (r.theta1 - r.theta0) * (r.rho1 - r.rho0);
  };
  auto split = [](const Rect& r) {
    const double tm = 0.5 * (r.theta0 + r.theta1);
    const double rm = 0.5 * (r.rho0 + r.rho1);
    return std::array<Rect, 4>{Rect{r.theta0, tm, r.rho0, rm}, Rect{tm, r.theta1, r.rho0, rm},
                               Rect{r.theta0, tm, rm, r.rho1}, Rect{tm, r.theta1, rm, r.rho1}};
  };
  auto forced = [](const Rect&) { return false; };
  return refine(roots, opt, rule, split, forced);
}

}  // namespace

QuadratureEstimate region_area(const ConvexDomain& domain, const Region& region, const QuadratureOptions& options) {
  if (!(options.tol > 0.0)) throw GeometryError(ErrorKind::InvalidArgument, "tol must be positive");
  if (const auto* poly = std::get_if<PolygonRegion>(&region)) return polygon_area(domain, *poly, options);
  return metric_ball_area(domain, std::get<BallRegion>(region), options);
}

QuadratureEstimate ball_area(const ConvexDomain& domain, const Point2& q, double radius,
                             const QuadratureOptions& options) {
  return region_area(domain, BallRegion{q, radius}, options);
}

}  // namespace hilbert
