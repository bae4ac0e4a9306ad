#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hilbert {

enum class ErrorKind {
  PointNotInterior,
  NoConvergence,
  NotOnBoundary,
  ImproperImage,
  SegmentNotInDomain,
  RegionOutsideDomain,
  DegenerateVertices,
  InvalidTriangle,
  SingularConstraints,
  StripTooWide,
  InsufficientSignal,
  NotConvex,
  PreconditionViolated,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind so that
// callers (the CLI in particular) can map it onto exit codes and messages.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hilbert
