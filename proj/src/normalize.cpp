#include "hilbert/normalize.hpp"

#include "hilbert/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace hilbert {
namespace {

// Alphas closer than this count as equal; conics tie under every labeling.
constexpr double kAlphaTie = 1e-7;

// Normalized covector distance from the line to the ideal one (up to sign).
double line_residual(const Line2& l, const Eigen::Vector3d& ideal) {
  const double n = norm(l.normal());
  const Eigen::Vector3d c = l.covector() / n;
  return std::min((c - ideal).cwiseAbs().maxCoeff(), (c + ideal).cwiseAbs().maxCoeff());
}

struct Candidate {
  ProjectiveMap map;
  double alpha;
};

std::optional<Candidate> solve_labeling(const ConvexDomain& domain, const std::array<Point2, 3>& v) {
  using Real = long double;
  using Vec3r = Eigen::Matrix<Real, 3, 1>;
  const std::array<Eigen::Vector2d, 3> targets{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)};
  // Extended precision: near-coincident vertices make the system ill conditioned.
  Eigen::Matrix<Real, 8, 9> a = Eigen::Matrix<Real, 8, 9>::Zero();
  // Unknowns are the rows of H stacked: h = (r0, r1, r2).
  auto put = [&](int row, int h_row, const Vec3r& x, Real coef) {
    a.block<1, 3>(row, 3 * h_row) += coef * x.transpose();
  };
  int row = 0;
  for (int k = 0; k < 3; ++k) {
    const Vec3r p(v[k].x, v[k].y, 1.0L);
    // (Hp)_y = t_y (Hp)_z and (Hp)_x = t_x (Hp)_z.
    put(row, 1, p, 1.0L);
    put(row, 2, p, -targets[k](1));
    ++row;
    put(row, 0, p, 1.0L);
    put(row, 2, p, -targets[k](0));
    ++row;
  }
  // Tangent directions at the first two vertices keep y = 0 and x = 0.
  for (int k = 0; k < 2; ++k) {
    const Vec2 n = domain.supporting_line(v[k]).normal();
    const Vec3r d(-n.y, n.x, 0.0L);
    put(row, k == 0 ? 1 : 0, d / static_cast<Real>(norm(n)), 1.0L);
    ++row;
  }
  for (int r = 0; r < 8; ++r) a.row(r).normalize();
  Eigen::JacobiSVD<Eigen::Matrix<Real, 8, 9>> svd(a, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (!(sigma(7) > 1e-12L * sigma(0))) {
    throw GeometryError(ErrorKind::SingularConstraints, "normalization constraints are degenerate");
  }
  const Eigen::Matrix<Real, 9, 1> h = svd.matrixV().col(8) / svd.matrixV().col(8).norm();
  Eigen::Matrix3d m;
  m << double(h(0)), double(h(1)), double(h(2)), double(h(3)), double(h(4)), double(h(5)), double(h(6)), double(h(7)),
      double(h(8));
  ProjectiveMap map(m / m.norm());
  if (map.weight(domain.center()) < 0.0) map = ProjectiveMap(-map.matrix());

  const Line2 image = map.apply(domain.supporting_line(v[2]));
  const double alpha = image.u / (image.u + image.v);
  if (!(alpha > 0.0 && alpha < 1.0)) return std::nullopt;
  return Candidate{map, alpha};
}

}  // namespace

Point2 Frame::to_local(const Point2& p) const {
  const Vec2 d = p - origin;
  const double det = cross(x_axis, y_axis);
  return {cross(d, y_axis) / det, cross(x_axis, d) / det};
}

Frame tangent_frame(const ConvexDomain& domain, const Point2& b) {
  const Line2 l = domain.supporting_line(b);
  const Vec2 inward = -normalized(l.normal());
  return Frame{b, {inward.y, -inward.x}, inward};
}

GraphStrip boundary_graph(const ConvexDomain& domain, const Point2& tangency, const Frame& frame, double rho,
                          int samples) {
  if (!(rho > 0.0) || samples < 3 || samples % 2 == 0) {
    throw GeometryError(ErrorKind::InvalidArgument, "strip needs rho > 0 and an odd sample count");
  }
  const double tol = domain.boundary_tolerance();
  if (!(std::abs(domain.level(tangency)) <= tol)) {
    throw GeometryError(ErrorKind::NotOnBoundary, "tangency point is not on the boundary");
  }
  const Frame f0{tangency, frame.x_axis, frame.y_axis};
  const auto boundary = domain.boundary_samples(4096);
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  const double scale = domain.bounding_box().diameter();
  for (const auto& p : boundary) {
    const Point2 q = f0.to_local(p);
    if (q.y < -1e-9 * scale) {
      throw GeometryError(ErrorKind::PreconditionViolated, "frame x axis is not a supporting line from below");
    }
    xmin = std::min(xmin, q.x);
    xmax = std::max(xmax, q.x);
  }
  if (!(f0.to_local(domain.center()).y > 0.0)) {
    throw GeometryError(ErrorKind::PreconditionViolated, "domain is not on the upper side of the frame");
  }
  if (!(xmin < -rho && xmax > rho)) {
    throw GeometryError(ErrorKind::StripTooWide, "domain does not cross the strip");
  }

  // Each vertical line meets the domain; find one interior point on it and
  // follow the chord downwards.
  double ymax = 0.0;
  for (const auto& p : boundary) ymax = std::max(ymax, f0.to_local(p).y);
  const Vec2 up = normalized(f0.y_axis);
  GraphStrip out;
  out.rho = rho;
  out.x.resize(samples);
  out.f.resize(samples);
  const int half = samples / 2;
  for (int i = 0; i < samples; ++i) {
    const double x = rho * static_cast<double>(i - half) / half;
    out.x[i] = x;
    if (i == half) {
      out.f[i] = 0.0;
      continue;
    }
    std::optional<Point2> inside;
    for (int n = 16; n <= 65536 && !inside; n *= 4) {
      for (int j = 1; j < n; ++j) {
        const Point2 p = f0.to_world(x, ymax * j / n);
        if (domain.contains(p)) {
          inside = p;
          break;
        }
      }
    }
    if (!inside) throw GeometryError(ErrorKind::StripTooWide, "vertical line misses the domain");
    const Point2 low = domain.chord(*inside, up).p_minus;
    out.f[i] = std::max(0.0, f0.to_local(low).y);
  }
  out.s = (out.f.back() - out.f.front()) / (2.0 * rho);
  out.b = 0.5 * (out.f.back() + out.f.front());
  return out;
}

bool midpoint_convex(const std::vector<double>& f, double slack) {
  const std::size_t n = f.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t h = 1; h <= std::min(i, n - 1 - i); ++h) {
      const double lhs = 2.0 * f[i];
      const double rhs = f[i - h] + f[i + h];
      if (lhs > rhs + slack * (std::abs(f[i - h]) + std::abs(f[i + h]) + std::abs(f[i])) + 1e-15) return false;
    }
  }
  return true;
}

PowerFit graph_alpha_fit(const GraphStrip& strip) {
  const double lo = strip.rho / 100.0;
  const double hi = strip.rho / 3.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < strip.x.size(); ++i) {
    const double ax = std::abs(strip.x[i]);
    if (ax < lo || ax > hi || !(strip.f[i] > 1e-13)) continue;
    const double lx = std::log(ax);
    const double ly = std::log(strip.f[i]);
    pts.emplace_back(lx, ly);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 8) throw GeometryError(ErrorKind::InsufficientSignal, "graph is below 1e-13 on the fit window");
  const double dn = static_cast<double>(n);
  const double alpha = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  const double log_mu = (sy - alpha * sx) / dn;
  double ss = 0.0;
  for (const auto& [lx, ly] : pts) ss += std::pow(ly - log_mu - alpha * lx, 2);
  return PowerFit{std::exp(log_mu), alpha, std::sqrt(ss / dn), n};
}

NormalizationResult normalize_triangle_pointed(const ConvexDomain& domain, const IdealTriangle& t) {
  if (!t.valid) throw GeometryError(ErrorKind::InvalidTriangle, "ideal triangle is not valid: " + t.invalid_reason);
  const auto v = t.vertices();
  static constexpr std::array<std::array<int, 3>, 6> kLabelings{
      {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 0, 1}, {1, 2, 0}, {2, 1, 0}}};
  std::optional<NormalizationResult> best;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& lab : kLabelings) {
    const std::array<Point2, 3> w{v[lab[0]], v[lab[1]], v[lab[2]]};
    const auto c = solve_labeling(domain, w);
    if (!c) continue;
    if (best && !(c->alpha < best->alpha - kAlphaTie)) {
      smallest = std::min(smallest, c->alpha);
      continue;
    }
    std::optional<ConvexDomain> image;
    try {
      image = projective_image(domain, c->map);
    } catch (const GeometryError& e) {
      if (e.kind() != ErrorKind::ImproperImage) throw;
      continue;
    }
    best = NormalizationResult{c->map, *image, lab, c->alpha, 0.0, 0.0, c->alpha};
    smallest = c->alpha;
  }
  if (!best) throw GeometryError(ErrorKind::ImproperImage, "no labeling gives a proper normal form");

  NormalizationResult& r = *best;
  const double own_alpha = r.alpha;
  // Within a tie the map comes from the earliest labeling, alpha from the smallest value.
  r.alpha = r.e_report = std::min(r.alpha, smallest);
  const std::array<Point2, 3> targets{Point2{1, 0}, Point2{0, 1}, Point2{1, 1}};
  for (int k = 0; k < 3; ++k) {
    r.vertex_residual = std::max(r.vertex_residual, norm(r.map.apply(v[r.labels[k]]) - targets[k]));
  }
  // Residuals of the solved constraints on the mapped supporting lines.
  const Line2 la = r.map.apply(domain.supporting_line(v[r.labels[0]]));
  const Line2 lb = r.map.apply(domain.supporting_line(v[r.labels[1]]));
  const Line2 lc = r.map.apply(domain.supporting_line(v[r.labels[2]]));
  double res = std::max(line_residual(la, {0, 1, 0}), line_residual(lb, {1, 0, 0}));
  const double nc = norm(lc.normal());
  res = std::max(res, std::abs(lc.signed_distance({1.0 / own_alpha, 0.0})) / nc);
  res = std::max(res, std::abs(lc.signed_distance({0.0, 1.0 / (1.0 - own_alpha)})) / nc);
  r.tangency_residual = res;
  return r;
}

double alpha_lower_bound(const std::vector<NormalizationResult>& batch) {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& r : batch) out = std::min(out, r.alpha);
  return out;
}

}  // namespace hilbert
