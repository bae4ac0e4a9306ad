#pragma once

#include "hilbert/geometry.hpp"

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hilbert {

class ConvexDomain;

struct EllipseShape {
  Point2 center;
  double semi_a = 1.0;
  double semi_b = 1.0;
  double rotation = 0.0;
};

/// {x : ||(x - center) / scale||_p < 1}
struct PBallShape {
  double p = 2.0;
  Point2 center;
  double scale = 1.0;
};

struct PolygonShape {
  std::vector<Point2> vertices;  // counterclockwise
  std::vector<Vec2> normals;     // outward unit normal of edge i -> i+1
  std::vector<double> offsets;   // n_i . x <= offset_i inside
  std::vector<double> cumulative_length;
  bool strictly_convex_position = true;
};

/// {(x, y) : |x|^alpha < y < 1}, tangent to the x axis at the origin.
struct PowerCapShape {
  double alpha = 2.0;
};

struct ProjectiveShape {
  std::shared_ptr<const ConvexDomain> inner;
  ProjectiveMap map;      // inner -> this
  ProjectiveMap inverse;  // this -> inner
  BoundingBox box;
};

enum class DomainKind { Ellipse, PBall, Polygon, PowerCap, Projective };

/// Boundary intersections of the line through an interior point.
/// `p_plus` is reached along +v, `p_minus` along -v.
struct Chord {
  Point2 p_minus;
  Point2 p_plus;
};

/// Bounded open convex planar domain. Values are immutable and cheap to copy.
///
/// Boundary parameters are polar angles (radians, ray from `center()`) for the
/// analytic variants and arc-length fractions in [0, 1) for polygons. A
/// projective image uses the parameterization of its inner domain.
class ConvexDomain {
 public:
  using Shape = std::variant<EllipseShape, PBallShape, PolygonShape, PowerCapShape, ProjectiveShape>;

  static ConvexDomain ellipse(Point2 center, double semi_a, double semi_b, double rotation = 0.0);
  static ConvexDomain disk(Point2 center = {}, double radius = 1.0);
  static ConvexDomain pball(double p, Point2 center = {}, double scale = 1.0);
  static ConvexDomain polygon(std::vector<Point2> vertices);
  /// Regular n-gon with circumradius `radius`, first vertex at angle `phase`.
  static ConvexDomain regular_polygon(int n, double radius = 1.0, double phase = 0.0,
                                      Point2 center = {});
  /// The square (0, 1)^2.
  static ConvexDomain unit_square();
  static ConvexDomain power_cap(double alpha);
  /// Image of `inner` under `map`; throws ImproperImage when the line sent to
  /// infinity meets the closure of `inner`.
  static ConvexDomain projective_image(const ConvexDomain& inner, const ProjectiveMap& map);

  DomainKind kind() const;
  const Shape& shape() const { return *shape_; }
  std::string label() const;

  /// Strictly negative inside, zero on the boundary, positive outside. The
  /// scale is comparable to a Euclidean distance near the boundary.
  double level(const Point2& p) const;
  bool contains(const Point2& p) const { return level(p) < 0.0; }

  /// Distances from interior p to the boundary along +u and -u (|u| = 1).
  std::pair<double, double> exit_distances(const Point2& p, const Vec2& u) const;
  double exit_distance(const Point2& p, const Vec2& u) const { return exit_distances(p, u).first; }

  Chord chord(const Point2& p, const Vec2& v) const;
  Line2 supporting_line(const Point2& b) const;

  Point2 boundary_point(double param) const;
  double param_period() const;
  std::vector<Point2> boundary_samples(int n) const;

  Point2 center() const;
  BoundingBox bounding_box() const;
  bool is_strictly_convex() const;

  /// Tolerance used when deciding whether a point is on the boundary.
  double boundary_tolerance() const;

 private:
  explicit ConvexDomain(Shape shape) : shape_(std::make_shared<const Shape>(std::move(shape))) {}

  std::shared_ptr<const Shape> shape_;
};

ConvexDomain projective_image(const ConvexDomain& domain, const ProjectiveMap& map);

}  // namespace hilbert
