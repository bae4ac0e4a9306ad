#pragma once

#include "hilbert/convex_domain.hpp"
#include "hilbert/triangles.hpp"

#include <vector>

namespace hilbert {

/// Affine frame: local (x, y) is origin + x * x_axis + y * y_axis.
struct Frame {
  Point2 origin;
  Vec2 x_axis{1, 0};
  Vec2 y_axis{0, 1};

  Point2 to_world(double x, double y) const { return origin + x * x_axis + y * y_axis; }
  Point2 to_local(const Point2& p) const;
};

/// Orthonormal frame at a boundary point: x along the supporting line, y
/// pointing into the domain.
Frame tangent_frame(const ConvexDomain& domain, const Point2& b);

/// Lower boundary of the domain over [-rho, rho] in a frame whose x axis is a
/// supporting line: f(x) = inf{y : (x, y) in the closure}.
struct GraphStrip {
  double rho = 0.0;
  double s = 0.0;  // cap line y = s x + b through the two end samples
  double b = 0.0;
  std::vector<double> x;
  std::vector<double> f;
};

constexpr int kGraphSamples = 4097;

/// Throws NotOnBoundary, PreconditionViolated (the x axis does not support the
/// domain from below) and StripTooWide (the domain does not cross the strip).
GraphStrip boundary_graph(const ConvexDomain& domain, const Point2& tangency, const Frame& frame, double rho,
                          int samples = kGraphSamples);

/// True when f passes the midpoint convexity test at every grid triple
/// (x - h, x, x + h), up to `slack` times the local magnitude.
bool midpoint_convex(const std::vector<double>& f, double slack = 1e-12);

struct PowerFit {
  double mu = 0.0;
  double alpha = 0.0;
  double residual = 0.0;  // rms of the log-log fit
  std::size_t points = 0;
};

/// Least squares fit of ln f against ln |x| on [-rho/3, rho/3] without the
/// dead zone |x| < rho/100. Throws InsufficientSignal.
PowerFit graph_alpha_fit(const GraphStrip& strip);

struct NormalizationResult {
  ProjectiveMap map;
  ConvexDomain normalized;
  /// Labels of the original vertices sent to (1,0), (0,1), (1,1).
  std::array<int, 3> labels{0, 1, 2};
  double alpha = 0.0;
  double vertex_residual = 0.0;
  double tangency_residual = 0.0;
  double e_report = 0.0;  // smallest alpha seen; equals alpha for one result
};

/// Projective map sending the triangle's vertices to (1,0), (0,1), (1,1) and
/// the supporting lines at the first two to the coordinate axes. All six
/// labelings are tried; the smallest alpha wins, ties going to the earliest
/// labeling in the order (0,1,2), (1,0,2), (0,2,1), (2,0,1), (1,2,0), (2,1,0).
/// Throws InvalidTriangle, SingularConstraints and ImproperImage.
NormalizationResult normalize_triangle_pointed(const ConvexDomain& domain, const IdealTriangle& t);

/// Smallest alpha over a batch.
double alpha_lower_bound(const std::vector<NormalizationResult>& batch);

}  // namespace hilbert
