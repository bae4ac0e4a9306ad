#include "hilbert/metric.hpp"

#include "hilbert/errors.hpp"
#include "hilbert/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hilbert {
namespace {

void require_interior(const ConvexDomain& domain, const Point2& p) {
  if (!domain.contains(p)) throw GeometryError(ErrorKind::PointNotInterior, "point not interior");
}

std::string describe(const Point2& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x << "," << p.y << ")";
  return os.str();
}

// Thin-triangle side k is the one opposite to vertex k.
std::pair<Point2, Point2> side(const std::array<Point2, 3>& v, int k) {
  return {v[(k + 1) % 3], v[(k + 2) % 3]};
}

}  // namespace

double hilbert_distance(const ConvexDomain& domain, const Point2& p, const Point2& q) {
  require_interior(domain, p);
  require_interior(domain, q);
  const Vec2 v = q - p;
  const double len = norm(v);
  if (len < 1e-14) return 0.0;
  const Vec2 u = v / len;
  // Exit behind p and exit beyond q are each measured from the nearer point,
  // which keeps the cross-ratio accurate when q approaches the boundary.
  const double behind_p = domain.exit_distances(p, u).second;
  const double beyond_q = domain.exit_distance(q, u);
  return 0.5 * (std::log1p(len / behind_p) + std::log1p(len / beyond_q));
}

double finsler_norm(const ConvexDomain& domain, const Point2& p, const Vec2& v) {
  require_interior(domain, p);
  const double len = norm(v);
  if (len == 0.0) return 0.0;
  const auto [plus, minus] = domain.exit_distances(p, v / len);
  return 0.5 * len * (1.0 / minus + 1.0 / plus);
}

double gromov_product(const ConvexDomain& domain, const Point2& x, const Point2& y, const Point2& w) {
  return 0.5 * (hilbert_distance(domain, x, w) + hilbert_distance(domain, y, w) -
                hilbert_distance(domain, x, y));
}

double point_to_segment_distance(const ConvexDomain& domain, const Point2& p, const Point2& s0,
                                 const Point2& s1) {
  require_interior(domain, p);
  const double tol = domain.boundary_tolerance();
  if (domain.level(s0) > tol || domain.level(s1) > tol || !domain.contains(lerp(s0, s1, 0.5))) {
    throw GeometryError(ErrorKind::SegmentNotInDomain, "segment is not inside the domain");
  }
  auto f = [&](double t) {
    const Point2 s = lerp(s0, s1, t);
    if (!domain.contains(s)) return std::numeric_limits<double>::infinity();
    return hilbert_distance(domain, p, s);
  };
  return scan_golden_minimize(f, 0.0, 1.0, 256, 1e-12).value;
}

// ---------------------------------------------------------------- sampling

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t RandomStream::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

PointSampler::PointSampler(const ConvexDomain& domain, const SamplerConfig& config)
    : domain_(domain), config_(config), rng_(config.seed) {
  if (!(config.approach > 0.0 && config.approach < 1.0)) {
    throw GeometryError(ErrorKind::InvalidArgument, "approach parameter must lie in (0, 1)");
  }
}

Point2 PointSampler::point_at(const ConvexDomain& domain, double param, double u, double approach) {
  const Point2 c = domain.center();
  const Point2 b = domain.boundary_point(param);
  const double r = -std::expm1(u * std::log(approach));  // 1 - approach^u
  return c + r * (b - c);
}

Point2 PointSampler::next() {
  const double period = domain_.param_period();
  const bool focus = !config_.focus_params.empty() && rng_.uniform() < config_.focus_probability;
  double param = 0.0;
  double u = 0.0;
  if (focus) {
    param = config_.focus_params[rng_.index(config_.focus_params.size())];
    u = (rng_.uniform() < 0.5) ? 1.0 : rng_.uniform_open_left();
  } else {
    param = period * rng_.uniform();
    u = rng_.uniform_open_left();
  }
  return point_at(domain_, param, u, config_.approach);
}

std::vector<std::array<Point2, 4>> sample_quadruples(const ConvexDomain& domain, const SamplerConfig& config) {
  PointSampler sampler(domain, config);
  std::vector<std::array<Point2, 4>> out(config.budget);
  for (auto& q : out) {
    for (auto& p : q) p = sampler.next();
  }
  return out;
}

std::vector<std::array<Point2, 3>> sample_triangles(const ConvexDomain& domain, const SamplerConfig& config) {
  PointSampler sampler(domain, config);
  std::vector<std::array<Point2, 3>> out(config.budget);
  for (auto& t : out) {
    for (auto& p : t) p = sampler.next();
  }
  return out;
}

// ---------------------------------------------------------------- four point

double four_point_defect(const ConvexDomain& domain, const FourPointWitness& q) {
  const auto& [x, y, z, w] = q.points;
  return std::min(gromov_product(domain, x, y, w), gromov_product(domain, y, z, w)) -
         gromov_product(domain, x, z, w);
}

double four_point_delta(const ConvexDomain& domain, const std::array<Point2, 4>& pts,
                        FourPointWitness* best) {
  // Six pairwise distances, then all 12 role assignments (basepoint w, middle y).
  double d[4][4] = {};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) d[i][j] = d[j][i] = hilbert_distance(domain, pts[i], pts[j]);
  }
  auto gp = [&](int a, int b, int w) { return 0.5 * (d[a][w] + d[b][w] - d[a][b]); };
  double out = 0.0;
  if (best) best->points = pts;
  for (int w = 0; w < 4; ++w) {
    for (int y = 0; y < 4; ++y) {
      if (y == w) continue;
      int others[2];
      int n = 0;
      for (int k = 0; k < 4; ++k) {
        if (k != w && k != y) others[n++] = k;
      }
      const int x = others[0];
      const int z = others[1];
      const double v = std::min(gp(x, y, w), gp(y, z, w)) - gp(x, z, w);
      if (v > out) {
        out = v;
        if (best) best->points = {pts[x], pts[y], pts[z], pts[w]};
      }
    }
  }
  return out;
}

DeltaEstimate delta_four_point(const ConvexDomain& domain, const std::vector<std::array<Point2, 4>>& quadruples) {
  DeltaEstimate est;
  est.samples_used = quadruples.size();
  bool found = false;
  for (const auto& q : quadruples) {
    FourPointWitness w;
    const double v = four_point_delta(domain, q, &w);
    if (v > est.delta_hat || !found) {
      if (v > est.delta_hat) est.delta_hat = v;
      est.four_point = w;
      found = true;
    }
  }
  const auto& p = est.four_point.points;
  est.witness = "four-point x=" + describe(p[0]) + " y=" + describe(p[1]) + " z=" + describe(p[2]) +
                " w=" + describe(p[3]);
  return est;
}

DeltaEstimate delta_four_point(const ConvexDomain& domain, const SamplerConfig& config) {
  return delta_four_point(domain, sample_quadruples(domain, config));
}

// ---------------------------------------------------------------- thin triangles

double thin_defect(const ConvexDomain& domain, const ThinWitness& w) {
  const auto [a, b] = side(w.vertices, (w.side + 1) % 3);
  const auto [c, d] = side(w.vertices, (w.side + 2) % 3);
  return std::min(point_to_segment_distance(domain, w.point, a, b),
                  point_to_segment_distance(domain, w.point, c, d));
}

double triangle_thinness(const ConvexDomain& domain, const std::array<Point2, 3>& v, ThinWitness* best) {
  double out = 0.0;
  if (best) *best = ThinWitness{v, 0, 0.0, v[1]};
  if (std::abs(cross(v[1] - v[0], v[2] - v[0])) <= 1e-14 * std::max(1.0, norm(v[1] - v[0]) * norm(v[2] - v[0]))) {
    return 0.0;  // degenerate: the sides overlap
  }
  for (int k = 0; k < 3; ++k) {
    const auto [s0, s1] = side(v, k);
    ThinWitness probe{v, k, 0.0, s0};
    auto f = [&](double t) {
      probe.point = lerp(s0, s1, t);
      if (!domain.contains(probe.point)) return -std::numeric_limits<double>::infinity();
      return thin_defect(domain, probe);
    };
    const ScalarMinimum m = scan_golden_maximize(f, 0.0, 1.0, 32, 1e-9);
    if (std::isfinite(m.value) && m.value > out) {
      out = m.value;
      if (best) *best = ThinWitness{v, k, m.argmin, lerp(s0, s1, m.argmin)};
    }
  }
  return out;
}

DeltaEstimate delta_thin(const ConvexDomain& domain, const std::vector<std::array<Point2, 3>>& triangles) {
  DeltaEstimate est;
  est.samples_used = triangles.size();
  for (const auto& t : triangles) {
    ThinWitness w;
    const double v = triangle_thinness(domain, t, &w);
    if (v > est.delta_hat || (est.delta_hat == 0.0 && &t == &triangles.front())) {
      est.delta_hat = std::max(est.delta_hat, v);
      est.thin = w;
    }
  }
  const auto& w = est.thin;
  est.witness = "thin triangle a=" + describe(w.vertices[0]) + " b=" + describe(w.vertices[1]) +
                " c=" + describe(w.vertices[2]) + " side=" + std::to_string(w.side) +
                " p=" + describe(w.point);
  return est;
}

DeltaEstimate delta_thin(const ConvexDomain& domain, const SamplerConfig& config) {
  return delta_thin(domain, sample_triangles(domain, config));
}

}  // namespace hilbert
