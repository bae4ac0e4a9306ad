#include "doctest.h"

#include "hilbert/errors.hpp"
#include "hilbert/triangles.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace hilbert;
using hilbert::testing::random_map;

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kDeg = kPi / 180.0;

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.kind();
  }
  FAIL("expected a GeometryError");
  return ErrorKind::InvalidArgument;
}

double piece_area(const ConvexDomain& d, std::vector<Point2> v, const QuadratureOptions& q = {}) {
  return region_area(d, PolygonRegion{std::move(v)}, q).value;
}
}  // namespace

TEST_CASE("make_ideal_triangle: examples") {
  const auto disk = ConvexDomain::disk();
  const auto t = make_ideal_triangle(disk, 90 * kDeg, 210 * kDeg, 330 * kDeg);
  CHECK(t.valid);
  CHECK(t.invalid_reason.empty());
  CHECK(norm(t.a - Point2{0, 1}) < 1e-15);

  const auto square = ConvexDomain::unit_square();
  const auto flat = make_ideal_triangle(square, 0.05, 0.2, 0.6);
  CHECK_FALSE(flat.valid);
  CHECK(flat.invalid_reason == "side in boundary");
  // One vertex per edge is fine.
  CHECK(make_ideal_triangle(square, 0.1, 0.4, 0.8).valid);

  CHECK(kind_of([&] { make_ideal_triangle(disk, 0.0, 0.0, 90 * kDeg); }) == ErrorKind::DegenerateVertices);
  CHECK(kind_of([&] { make_ideal_triangle(disk, 0.0, 2 * kPi, 1.0); }) == ErrorKind::DegenerateVertices);
  CHECK(kind_of([&] { make_ideal_triangle(square, 0.05, 0.1, 0.2); }) == ErrorKind::DegenerateVertices);
  CHECK(kind_of([&] { make_ideal_triangle(disk, Point2{0.5, 0}, Point2{0, 1}, Point2{-1, 0}); }) ==
        ErrorKind::NotOnBoundary);
}

TEST_CASE("ideal_triangle_area: disk triangles all have area pi") {
  const auto disk = ConvexDomain::disk();
  const std::vector<std::array<double, 3>> params{
      {90 * kDeg, 210 * kDeg, 330 * kDeg}, {0.1, 2.0, 4.0}, {0.0, 0.3, kPi}, {0.82, 0.80, 5.89}, {1.0, 1.5, 1.6}};
  for (const auto& p : params) {
    const auto t = make_ideal_triangle(disk, p[0], p[1], p[2]);
    const auto q = ideal_triangle_area(disk, t);
    CHECK_FALSE(q.diverged);
    CHECK(q.value == doctest::Approx(kPi).epsilon(1e-3));
    CHECK(std::abs(q.value - kPi) <= q.error_bound + 1e-4);
  }
}

TEST_CASE("ideal_triangle_area: unbalanced frame agrees") {
  TriangleAreaOptions plain;
  plain.balance = false;
  const auto disk = ConvexDomain::disk();
  for (const auto& p : std::vector<std::array<double, 3>>{{90 * kDeg, 210 * kDeg, 330 * kDeg}, {0.1, 2.0, 4.0}}) {
    const auto t = make_ideal_triangle(disk, p[0], p[1], p[2]);
    CHECK(ideal_triangle_area(disk, t, plain).value == doctest::Approx(kPi).epsilon(1e-3));
  }
  const auto ball = ConvexDomain::pball(4.0);
  const auto t = make_ideal_triangle(ball, 0.3, 2.5, 4.4);
  CHECK(ideal_triangle_area(ball, t, plain).value ==
        doctest::Approx(ideal_triangle_area(ball, t).value).epsilon(1e-3));
}

TEST_CASE("balancing_map sends a disk triangle to the standard position") {
  const auto disk = ConvexDomain::disk();
  const auto t = make_ideal_triangle(disk, 0.4, 0.7, 3.0);
  const ProjectiveMap h = balancing_map(disk, t);
  const auto image = projective_image(disk, h);
  CHECK(norm(h.apply(t.a) - Point2{0, 1}) < 1e-12);
  for (int k = 0; k < 16; ++k) {
    const Point2 b = h.apply(disk.boundary_point(k * kPi / 8));
    CHECK(norm(b) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(image.contains({0, 0}));
}

TEST_CASE("ideal_triangle_area: square corner diverges") {
  const auto square = ConvexDomain::unit_square();
  const auto t = make_ideal_triangle(square, Point2{0, 0}, Point2{1, 1e-3}, Point2{1 - 1e-3, 1});
  REQUIRE(t.valid);
  const auto r = ideal_triangle_area_report(square, t);
  CHECK(r.total.diverged);
  CHECK(r.total.value > 10 * kPi);

  // The corner at the origin contributes a constant amount per dyadic cut,
  // (pi / 12) * 2 (ln 2)^2 in the limit of the quadrant.
  const auto corner = make_ideal_triangle(square, Point2{0, 0}, Point2{1, 0.5}, Point2{0.5, 1});
  const auto c = ideal_triangle_area_report(square, corner);
  CHECK(c.total.diverged);
  int divergent = 0;
  for (const auto& ladder : c.corners) {
    if (!ladder.diverged) continue;
    ++divergent;
    CHECK(ladder.increments.back() == doctest::Approx(kPi / 6 * std::log(2.0) * std::log(2.0)).epsilon(5e-3));
    CHECK(ladder.tail == 0.0);
  }
  CHECK(divergent == 1);
}

TEST_CASE("ideal_triangle_area: invalid triangles are rejected") {
  const auto square = ConvexDomain::unit_square();
  const auto flat = make_ideal_triangle(square, 0.05, 0.2, 0.6);
  CHECK(kind_of([&] { ideal_triangle_area(square, flat); }) == ErrorKind::InvalidTriangle);
  CHECK(kind_of([&] { corner_decomposition(square, flat, 0.25); }) == ErrorKind::InvalidTriangle);
  const auto disk = ConvexDomain::disk();
  const auto t = make_ideal_triangle(disk, 0.0, 2.0, 4.0);
  CHECK(kind_of([&] { corner_decomposition(disk, t, 0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { corner_decomposition(disk, t, 0.75); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("corner_decomposition: geometry") {
  const auto disk = ConvexDomain::disk();
  const auto t = make_ideal_triangle(disk, 0.3, 2.1, 4.4);
  const auto dec = corner_decomposition(disk, t, 0.25);
  CHECK(dec.hexagon.size() == 6);
  const auto v = t.vertices();
  for (int k = 0; k < 3; ++k) {
    const auto& c = dec.corners[k];
    const Vec2 cut = c.cut_next - c.cut_prev;
    const Vec2 opposite = v[(k + 1) % 3] - v[(k + 2) % 3];
    CHECK(std::abs(cross(cut, opposite)) < 1e-14);
    CHECK(dec.hexagon[2 * k] == c.cut_next);
  }
  for (const auto& p : dec.hexagon) CHECK(disk.contains(p));
  CHECK(corner_decomposition(disk, t, 0.5).hexagon.size() == 3);
}

TEST_CASE("corner_decomposition: symmetric triangle has equal corners") {
  const auto disk = ConvexDomain::disk();
  const auto t = make_ideal_triangle(disk, 90 * kDeg, 210 * kDeg, 330 * kDeg);
  const auto dec = corner_decomposition(disk, t, 0.25);
  QuadratureOptions q;
  q.tol = 1e-6;
  q.unit_ball.rel_tol = 1e-10;
  std::array<double, 3> areas{};
  for (int k = 0; k < 3; ++k) {
    const auto& c = dec.corners[k];
    areas[k] = piece_area(disk, {c.vertex, c.cut_next, c.cut_prev}, q);
  }
  CHECK(std::abs(areas[0] - areas[1]) < 1e-6);
  CHECK(std::abs(areas[0] - areas[2]) < 1e-6);
}

TEST_CASE("corner_decomposition: pieces partition the triangle") {
  QuadratureOptions q;
  q.tol = 1e-4;
  for (const auto& d : {ConvexDomain::disk(), ConvexDomain::pball(4.0)}) {
    const auto t = make_ideal_triangle(d, 0.3, 2.1, 4.4);
    const auto dec = corner_decomposition(d, t, 0.25);
    double pieces = piece_area(d, dec.hexagon, q);
    for (const auto& c : dec.corners) pieces += piece_area(d, {c.vertex, c.cut_next, c.cut_prev}, q);
    const double whole = piece_area(d, {t.a, t.b, t.c}, q);
    CHECK(std::abs(pieces - whole) <= 2 * q.tol * whole);
  }
}

TEST_CASE("corner_decomposition: hexagons exhaust the triangle") {
  const auto disk = ConvexDomain::disk();
  const auto t = make_ideal_triangle(disk, 0.3, 2.1, 4.4);
  double previous = 0.0;
  double last = 0.0;
  for (int k = 1; k <= 10; ++k) {
    last = piece_area(disk, corner_decomposition(disk, t, std::ldexp(1.0, -k)).hexagon);
    CHECK(last > previous);
    previous = last;
  }
  // The missing corners shrink like 2^{-k/2}.
  CHECK(kPi - last < 0.1);
  CHECK(kPi - last > 0.0);
}

TEST_CASE("invariants: corner ladders converge on the disk") {
  const auto disk = ConvexDomain::disk();
  RandomStream rng(17);
  for (int i = 0; i < 8; ++i) {
    const auto t = make_ideal_triangle(disk, 2 * kPi * rng.uniform(), 2 * kPi * rng.uniform(), 2 * kPi * rng.uniform());
    if (!t.valid) continue;
    const auto r = ideal_triangle_area_report(disk, t);
    for (const auto& ladder : r.corners) {
      CHECK_FALSE(ladder.diverged);
      const auto& inc = ladder.increments;
      for (std::size_t k = 1; k < inc.size(); ++k) CHECK(inc[k] < inc[k - 1]);
      CHECK(inc.back() / inc[inc.size() - 2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-2));
    }
    CHECK(r.total.value == doctest::Approx(kPi).epsilon(1e-3));
  }
}

TEST_CASE("invariants: area is projectively invariant") {
  RandomStream rng(23);
  const auto ball = ConvexDomain::pball(4.0);
  const auto t = make_ideal_triangle(ball, 0.3, 2.5, 4.4);
  const double base = ideal_triangle_area(ball, t).value;
  TriangleAreaOptions plain;
  plain.balance = false;
  int tested = 0;
  while (tested < 4) {
    const ProjectiveMap h = random_map(rng);
    std::optional<ConvexDomain> image;
    try {
      image = projective_image(ball, h);
    } catch (const GeometryError&) {
      continue;
    }
    ++tested;
    const auto mapped = make_ideal_triangle(*image, h.apply(t.a), h.apply(t.b), h.apply(t.c));
    REQUIRE(mapped.valid);
    CHECK(ideal_triangle_area(*image, mapped).value == doctest::Approx(base).epsilon(1e-3));
    CHECK(ideal_triangle_area(*image, mapped, plain).value == doctest::Approx(base).epsilon(2e-2));
  }
}

TEST_CASE("sup_area_search: examples") {
  const auto disk = ConvexDomain::disk();
  const auto d = sup_area_search(disk, {4, 3});
  REQUIRE(d.best);
  CHECK(d.best_area.value == doctest::Approx(kPi).epsilon(1e-3));
  CHECK(d.diverged == 0);
  CHECK(d.evaluated + d.invalid == 4);

  const auto square = ConvexDomain::unit_square();
  const auto s = sup_area_search(square, {6, 3, default_focus_params(square), 0.5, 0.0});
  CHECK(s.diverged >= 1);
  CHECK(s.diverged_values.size() == s.diverged);
  CHECK(s.evaluated + s.invalid == 6 + 4);  // the four corner triples come on top of the budget
  CHECK(s.best_area.value > kPi);

  const TriangleSamplerConfig config{6, 7, {kPi / 4, 3 * kPi / 4, 5 * kPi / 4, 7 * kPi / 4}, 0.3, 0.01};
  const double two = sup_area_search(ConvexDomain::pball(2.0), config).best_area.value;
  const double four = sup_area_search(ConvexDomain::pball(4.0), config).best_area.value;
  CHECK(four > two);

  CHECK(kind_of([&] { sup_area_search(disk, {0, 1}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("sup_area_search: deterministic under a seed") {
  const auto ball = ConvexDomain::pball(3.0);
  const TriangleSamplerConfig config{3, 11};
  const auto a = sup_area_search(ball, config);
  const auto b = sup_area_search(ball, config);
  CHECK(a.best_area.value == b.best_area.value);
  CHECK(a.evaluated == b.evaluated);
}
