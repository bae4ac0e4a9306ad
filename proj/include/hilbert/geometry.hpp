#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>

namespace hilbert {

/// Affine point (or free vector) of the plane.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
  Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
  Point2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend Point2 operator-(const Point2& a) { return {-a.x, -a.y}; }
  friend Point2 operator*(Point2 a, double s) { return a *= s; }
  friend Point2 operator*(double s, Point2 a) { return a *= s; }
  friend Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

using Vec2 = Point2;

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
inline Vec2 normalized(const Vec2& a) { return a / norm(a); }
inline Point2 lerp(const Point2& a, const Point2& b, double t) { return a + t * (b - a); }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Line u*x + v*y + w = 0 stored with u^2 + v^2 = 1.
///
/// Supporting lines returned by the library are oriented so that the domain
/// lies on the negative side, i.e. (u, v) is an outward normal.
struct Line2 {
  double u = 0.0;
  double v = 1.0;
  double w = 0.0;

  static Line2 from_coefficients(double u, double v, double w);
  static Line2 through(const Point2& p, const Vec2& normal);

  double signed_distance(const Point2& p) const { return u * p.x + v * p.y + w; }
  Vec2 normal() const { return {u, v}; }
  Line2 flipped() const { return {-u, -v, -w}; }
  Eigen::Vector3d covector() const { return {u, v, w}; }
};

/// Element of PGL(3, R) acting on the affine chart z = 1.
class ProjectiveMap {
 public:
  ProjectiveMap() : m_(Eigen::Matrix3d::Identity()) {}
  explicit ProjectiveMap(const Eigen::Matrix3d& m);

  static ProjectiveMap identity() { return ProjectiveMap(); }
  static ProjectiveMap affine(double a11, double a12, double a21, double a22,
                              double tx = 0.0, double ty = 0.0);

  const Eigen::Matrix3d& matrix() const { return m_; }
  ProjectiveMap inverse() const;
  ProjectiveMap operator*(const ProjectiveMap& rhs) const;

  /// Homogeneous weight of the image of p (last coordinate before division).
  double weight(const Point2& p) const;
  /// Image of p; nullopt when p is sent to the line at infinity.
  std::optional<Point2> try_apply(const Point2& p) const;
  /// Image of p; throws ImproperImage when p is sent to infinity.
  Point2 apply(const Point2& p) const;
  /// Differential of the map at p applied to v.
  Vec2 push_forward(const Point2& p, const Vec2& v) const;
  /// Image of a line (covectors transform by the inverse).
  Line2 apply(const Line2& line) const;

  /// Frobenius distance after normalizing both matrices to unit norm and a
  /// common sign; zero iff the maps agree in PGL(3).
  double projective_distance(const ProjectiveMap& other) const;

 private:
  Eigen::Matrix3d m_;
};

struct BoundingBox {
  Point2 lo;
  Point2 hi;

  double diameter() const { return distance(lo, hi); }
  Point2 center() const { return (lo + hi) * 0.5; }
};

}  // namespace hilbert
