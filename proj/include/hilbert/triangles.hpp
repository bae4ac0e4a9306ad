#pragma once

#include "hilbert/convex_domain.hpp"
#include "hilbert/measure.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hilbert {

/// Affine triangle spanned by three boundary points. It is valid when its open
/// hull lies in the domain and its sides meet the boundary only at the vertices
/// (checked on a grid of side points).
struct IdealTriangle {
  Point2 a, b, c;
  std::optional<std::array<double, 3>> params;  // boundary parameters, when built from them
  bool valid = false;
  std::string invalid_reason;

  std::array<Point2, 3> vertices() const { return {a, b, c}; }
};

/// Throws DegenerateVertices for coincident or collinear vertices and
/// NotOnBoundary for points off the boundary.
IdealTriangle make_ideal_triangle(const ConvexDomain& domain, double t1, double t2, double t3);
IdealTriangle make_ideal_triangle(const ConvexDomain& domain, const Point2& a, const Point2& b, const Point2& c);

/// Corner at `vertex` cut off by the segment [cut_next, cut_prev], which is
/// parallel to the opposite side.
struct CornerPiece {
  Point2 vertex;
  Point2 cut_next;  // on the side towards the next vertex
  Point2 cut_prev;  // on the side towards the previous vertex
};

struct CornerDecomposition {
  double s = 0.25;
  std::array<CornerPiece, 3> corners;
  std::vector<Point2> hexagon;  // same orientation as (a, b, c); a triangle when s = 1/2
};

/// Cuts at fraction s of each side from every vertex, s in (0, 1/2].
CornerDecomposition corner_decomposition(const ConvexDomain& domain, const IdealTriangle& t, double s);

struct TriangleAreaOptions {
  QuadratureOptions quadrature{};
  int ladder_levels = 12;  // cuts at s_k = 2^-k, k = 1..K
  /// A corner is divergent when each of the last two ladder increments is at
  /// least this fraction of the previous one, or when a piece fails to reach
  /// the quadrature tolerance (the ladder then stops early).
  double divergence_ratio = 0.99;
  /// Integrate in the image under balancing_map. Hilbert area is projectively
  /// invariant; the image keeps thin triangles well shaped for quadrature.
  bool balance = true;
};

/// Projective map sending the triangle to the equilateral triangle inscribed in
/// the unit circle, with the supporting lines at the vertices sent as close as
/// possible to the lines through each vertex parallel to the opposite side.
/// For a conic the image domain is the unit disk.
ProjectiveMap balancing_map(const ConvexDomain& domain, const IdealTriangle& t);

struct CornerLadder {
  std::vector<double> increments;  // area between cuts s_k and s_{k+1}; short if stopped early
  double partial = 0.0;            // sum of increments
  double tail = 0.0;               // Aitken estimate of the remaining area
  double error_bound = 0.0;
  bool diverged = false;
};

/// Pieces are integrated in the balanced frame when `balance` is set.
struct TriangleAreaReport {
  QuadratureEstimate total;
  QuadratureEstimate hexagon;  // the medial triangle, cut at s_1 = 1/2
  std::array<CornerLadder, 3> corners;
};

/// Hilbert area of a valid ideal triangle: central piece plus three corner
/// ladders, each extrapolated. Throws InvalidTriangle.
TriangleAreaReport ideal_triangle_area_report(const ConvexDomain& domain, const IdealTriangle& t,
                                              const TriangleAreaOptions& options = {});
QuadratureEstimate ideal_triangle_area(const ConvexDomain& domain, const IdealTriangle& t,
                                       const TriangleAreaOptions& options = {});

/// Boundary-parameter sampler for triples. With probability
/// `focus_probability` a parameter is drawn from `focus_params`; half of those
/// draws are jittered by at most `focus_jitter` (relative to the parameter period).
/// With a positive focus probability the search also evaluates every triple of
/// distinct focus parameters, before and in addition to the `budget` draws.
struct TriangleSamplerConfig {
  std::size_t budget = 16;
  std::uint64_t seed = 1;
  std::vector<double> focus_params;
  double focus_probability = 0.0;
  double focus_jitter = 0.0;
};

struct SupAreaResult {
  std::optional<IdealTriangle> best;
  QuadratureEstimate best_area;  // largest value among all evaluated triangles
  std::size_t evaluated = 0;
  std::size_t invalid = 0;
  std::size_t diverged = 0;
  std::vector<double> diverged_values;  // partial values of the divergent samples
};

/// Largest estimated area over sampled valid ideal triangles.
SupAreaResult sup_area_search(const ConvexDomain& domain, const TriangleSamplerConfig& sampler,
                              const TriangleAreaOptions& options = {});

/// Default focus parameters: polygon vertices, or the diagonal directions of a p-ball.
std::vector<double> default_focus_params(const ConvexDomain& domain);

}  // namespace hilbert
