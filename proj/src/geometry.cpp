#include "hilbert/geometry.hpp"

#include "hilbert/errors.hpp"

namespace hilbert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PointNotInterior: return "PointNotInterior";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotOnBoundary: return "NotOnBoundary";
    case ErrorKind::ImproperImage: return "ImproperImage";
    case ErrorKind::SegmentNotInDomain: return "SegmentNotInDomain";
    case ErrorKind::RegionOutsideDomain: return "RegionOutsideDomain";
    case ErrorKind::DegenerateVertices: return "DegenerateVertices";
    case ErrorKind::InvalidTriangle: return "InvalidTriangle";
    case ErrorKind::SingularConstraints: return "SingularConstraints";
    case ErrorKind::StripTooWide: return "StripTooWide";
    case ErrorKind::InsufficientSignal: return "InsufficientSignal";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Line2 Line2::from_coefficients(double u, double v, double w) {
  const double n = std::hypot(u, v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw GeometryError(ErrorKind::InvalidArgument, "line normal must be nonzero");
  }
  return {u / n, v / n, w / n};
}

Line2 Line2::through(const Point2& p, const Vec2& normal) {
  const Vec2 n = normalized(normal);
  return {n.x, n.y, -dot(n, p)};
}

ProjectiveMap::ProjectiveMap(const Eigen::Matrix3d& m) : m_(m) {
  const double scale = m.norm();
  if (!std::isfinite(scale) || std::abs(m.determinant()) <= 1e-14 * scale * scale * scale) {
    throw GeometryError(ErrorKind::InvalidArgument, "projective map must be nonsingular");
  }
}

ProjectiveMap ProjectiveMap::affine(double a11, double a12, double a21, double a22, double tx,
                                    double ty) {
  Eigen::Matrix3d m;
  m << a11, a12, tx, a21, a22, ty, 0.0, 0.0, 1.0;
  return ProjectiveMap(m);
}

ProjectiveMap ProjectiveMap::inverse() const { return ProjectiveMap(m_.inverse()); }

ProjectiveMap ProjectiveMap::operator*(const ProjectiveMap& rhs) const {
  return ProjectiveMap(m_ * rhs.m_);
}

double ProjectiveMap::weight(const Point2& p) const {
  return m_(2, 0) * p.x + m_(2, 1) * p.y + m_(2, 2);
}

std::optional<Point2> ProjectiveMap::try_apply(const Point2& p) const {
  const Eigen::Vector3d h = m_ * Eigen::Vector3d(p.x, p.y, 1.0);
  const double scale = std::abs(h.x()) + std::abs(h.y());
  if (std::abs(h.z()) <= 1e-300 || std::abs(h.z()) < 1e-15 * scale) return std::nullopt;
  return Point2{h.x() / h.z(), h.y() / h.z()};
}

Point2 ProjectiveMap::apply(const Point2& p) const {
  auto q = try_apply(p);
  if (!q) throw GeometryError(ErrorKind::ImproperImage, "point mapped to the line at infinity");
  return *q;
}

Vec2 ProjectiveMap::push_forward(const Point2& p, const Vec2& v) const {
  const Eigen::Vector3d h = m_ * Eigen::Vector3d(p.x, p.y, 1.0);
  const Eigen::Vector3d dh = m_ * Eigen::Vector3d(v.x, v.y, 0.0);
  const double z = h.z();
  return {(dh.x() * z - h.x() * dh.z()) / (z * z), (dh.y() * z - h.y() * dh.z()) / (z * z)};
}

Line2 ProjectiveMap::apply(const Line2& line) const {
  const Eigen::RowVector3d c = line.covector().transpose() * m_.inverse();
  return Line2::from_coefficients(c(0), c(1), c(2));
}

double ProjectiveMap::projective_distance(const ProjectiveMap& other) const {
  Eigen::Matrix3d a = m_ / m_.norm();
  Eigen::Matrix3d b = other.m_ / other.m_.norm();
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace hilbert
