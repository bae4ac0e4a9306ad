#pragma once

#include "hilbert/convex_domain.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hilbert {

/// Half the log of the cross-ratio [a, p, q, b] along the chord through p, q.
double hilbert_distance(const ConvexDomain& domain, const Point2& p, const Point2& q);

/// Infinitesimal Hilbert length of v at p.
double finsler_norm(const ConvexDomain& domain, const Point2& p, const Vec2& v);

/// (x . y)_w = (d(x, w) + d(y, w) - d(x, y)) / 2.
double gromov_product(const ConvexDomain& domain, const Point2& x, const Point2& y, const Point2& w);

/// Minimum of d(p, .) over the straight segment [s0, s1]. Endpoints may lie on
/// the boundary; the segment's relative interior must be inside the domain.
double point_to_segment_distance(const ConvexDomain& domain, const Point2& p, const Point2& s0,
                                 const Point2& s1);

/// Seeded, boundary-biased point sampler shared by the delta estimators.
///
/// A sample picks a boundary parameter and a radial fraction r = 1 - approach^u
/// (u uniform in (0, 1]) and returns center + r (boundary - center). With
/// probability `focus_probability` the parameter is taken from `focus_params`
/// instead, and then u = 1 half of the time.
struct SamplerConfig {
  std::size_t budget = 1000;
  std::uint64_t seed = 1;
  double approach = 1e-6;
  std::vector<double> focus_params;
  double focus_probability = 0.0;
};

/// Deterministic uniform stream (splitmix64 seeding of xoshiro256**) so that
/// results only depend on the seed, never on the standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

class PointSampler {
 public:
  PointSampler(const ConvexDomain& domain, const SamplerConfig& config);
  Point2 next();

  /// The point for an explicit (boundary parameter, depth exponent u) pair.
  static Point2 point_at(const ConvexDomain& domain, double param, double u, double approach);

 private:
  const ConvexDomain& domain_;
  SamplerConfig config_;
  RandomStream rng_;
};

struct FourPointWitness {
  std::array<Point2, 4> points{};  // x, y, z, w (w is the basepoint)
};

struct ThinWitness {
  std::array<Point2, 3> vertices{};
  int side = 0;          // p lies on the side opposite to vertex `side`
  double position = 0;   // p = lerp(start, end, position) along that side
  Point2 point;
};

/// Quadruple four-point defect min((x.y)_w, (y.z)_w) - (x.z)_w.
double four_point_defect(const ConvexDomain& domain, const FourPointWitness& q);
/// Largest defect over all role assignments of the four points, clamped at 0.
/// `best` receives the ordering that attains it.
double four_point_delta(const ConvexDomain& domain, const std::array<Point2, 4>& points,
                        FourPointWitness* best = nullptr);

/// min(dist(p, other side 1), dist(p, other side 2)) for the witness point.
double thin_defect(const ConvexDomain& domain, const ThinWitness& w);
/// Max over the three sides of the thin defect, maximized along each side.
double triangle_thinness(const ConvexDomain& domain, const std::array<Point2, 3>& vertices,
                         ThinWitness* best = nullptr);

struct DeltaEstimate {
  double delta_hat = 0.0;
  std::string witness;  // human readable description
  std::size_t samples_used = 0;
  FourPointWitness four_point;
  ThinWitness thin;
};

std::vector<std::array<Point2, 4>> sample_quadruples(const ConvexDomain& domain, const SamplerConfig& config);
std::vector<std::array<Point2, 3>> sample_triangles(const ConvexDomain& domain, const SamplerConfig& config);

DeltaEstimate delta_four_point(const ConvexDomain& domain, const SamplerConfig& config);
DeltaEstimate delta_four_point(const ConvexDomain& domain, const std::vector<std::array<Point2, 4>>& quadruples);
DeltaEstimate delta_thin(const ConvexDomain& domain, const SamplerConfig& config);
DeltaEstimate delta_thin(const ConvexDomain& domain, const std::vector<std::array<Point2, 3>>& triangles);

}  // namespace hilbert
