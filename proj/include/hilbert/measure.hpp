#pragma once

#include "hilbert/convex_domain.hpp"

#include <variant>
#include <vector>

namespace hilbert {

/// Polar integration of the Finsler unit ball at a point.
///
/// With `whiten` the direction samples are first used to fit a quadratic form
/// Q with F(p, u)^2 ~ u^T Q u; the integral is then taken over the image of the
/// ball under Q^{1/2}, which is close to a round disk even near the boundary.
/// With `adaptive` each Simpson panel is refined until its local error is
/// below `rel_tol` of the running total.
struct UnitBallOptions {
  int n_dirs = 64;
  bool whiten = true;
  bool adaptive = true;
  double rel_tol = 1e-11;
};

/// Euclidean area of B(p) = {v : F(p, v) < 1}.
double unit_ball_area(const ConvexDomain& domain, const Point2& p, const UnitBallOptions& options);
double unit_ball_area(const ConvexDomain& domain, const Point2& p, int n_dirs = 64);

/// Busemann density pi / Vol(B(p)).
double density(const ConvexDomain& domain, const Point2& p, const UnitBallOptions& options);
double density(const ConvexDomain& domain, const Point2& p);

struct QuadratureEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  int depth = 0;
  bool diverged = false;
  /// Totals of the refinement tree truncated at depth 0, 1, ..., depth.
  std::vector<double> history;
  std::size_t cells = 0;
};

/// Convex polygon; vertices may lie on the boundary of the domain.
struct PolygonRegion {
  std::vector<Point2> vertices;
};

/// Metric ball {p : d(center, p) < radius}.
struct BallRegion {
  Point2 center;
  double radius = 1.0;
};

using Region = std::variant<PolygonRegion, BallRegion>;

struct QuadratureOptions {
  double tol = 1e-3;
  int max_depth = 14;
  /// When >= 0, every cell is split exactly to this depth and no adaptivity
  /// is used, so two domains can be compared on identical nodes.
  int uniform_depth = -1;
  std::size_t max_refinements = 4000;
  UnitBallOptions unit_ball{16, true, true, 1e-6};
};

/// Hilbert measure of a region by adaptive triangulated quadrature.
///
/// Cells are refined by 4-way splits in a deterministic priority queue keyed
/// by (error, cell id). A cell is compared against the sum of its children.
/// Cells with a corner on the boundary use a graded collapsed Gauss rule
/// focused on that corner. `diverged` is set when the error target is not met
/// and the last two truncated totals still differ by more than a factor 1 + tol.
QuadratureEstimate region_area(const ConvexDomain& domain, const Region& region,
                               const QuadratureOptions& options = {});

/// Area of the metric ball of radius R about q.
QuadratureEstimate ball_area(const ConvexDomain& domain, const Point2& q, double radius,
                             const QuadratureOptions& options = {});

/// Euclidean radius of the metric sphere of radius rho in the direction whose
/// forward and backward exit distances from the center are t_plus, t_minus.
double hilbert_polar_radius(double t_plus, double t_minus, double rho);

}  // namespace hilbert
