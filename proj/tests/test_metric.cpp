#include "doctest.h"

#include "hilbert/errors.hpp"
#include "hilbert/metric.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

using namespace hilbert;
using hilbert::testing::domain_corpus;
using hilbert::testing::random_direction;
using hilbert::testing::random_interior;
using hilbert::testing::random_map;

namespace {
// Hyperbolic distance in the Klein model of the unit disk.
double klein_distance(const Point2& p, const Point2& q) {
  const double c = (1.0 - dot(p, q)) / std::sqrt((1.0 - dot(p, p)) * (1.0 - dot(q, q)));
  return std::acosh(std::max(1.0, c));
}

}  // namespace

TEST_CASE("hilbert_distance: golden values") {
  const auto disk = ConvexDomain::disk();
  CHECK(hilbert_distance(disk, {0, 0}, {0.5, 0}) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
  CHECK(hilbert_distance(disk, {0.3, 0.2}, {0.3, 0.2}) == 0.0);
  for (double r : {0.1, 0.5, 0.9, 0.999999}) {
    CHECK(std::abs(hilbert_distance(disk, {0, 0}, {r, 0}) - std::atanh(r)) < 1e-9);
  }
  CHECK(hilbert_distance(disk, {0, 0}, {0.9, 0}) == doctest::Approx(1.472219).epsilon(1e-6));
  CHECK_THROWS_AS(hilbert_distance(disk, {0, 0}, {1, 0}), GeometryError);
}

TEST_CASE("hilbert_distance: Klein model on random pairs") {
  const auto disk = ConvexDomain::disk();
  RandomStream rng(3);
  for (int i = 0; i < 500; ++i) {
    const Point2 p = random_interior(disk, rng, 0.999);
    const Point2 q = random_interior(disk, rng, 0.999);
    const double d = klein_distance(p, q);
    CHECK(std::abs(hilbert_distance(disk, p, q) - d) <= 1e-9 * std::max(1.0, d));
  }
}

TEST_CASE("finsler_norm: examples and homogeneity") {
  const auto disk = ConvexDomain::disk();
  CHECK(finsler_norm(disk, {0, 0}, {1, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(finsler_norm(disk, {0.5, 0}, {1, 0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(finsler_norm(disk, {0.5, 0}, {0, 0}) == 0.0);
  RandomStream rng(4);
  for (const auto& d : domain_corpus()) {
    for (int i = 0; i < 50; ++i) {
      const Point2 p = random_interior(d, rng);
      const Vec2 v = random_direction(rng) * (0.1 + rng.uniform());
      CHECK(finsler_norm(d, p, 2.0 * v) == doctest::Approx(2.0 * finsler_norm(d, p, v)).epsilon(1e-14));
    }
  }
}

TEST_CASE("finsler_norm integrates to the distance along a segment") {
  const auto d = ConvexDomain::pball(4.0);
  const Point2 p{-0.3, 0.1};
  const Point2 q{0.6, 0.4};
  // Composite Simpson on 2000 panels.
  const int n = 2000;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * finsler_norm(d, lerp(p, q, double(i) / n), q - p);
  }
  s /= 3.0 * n;
  CHECK(s == doctest::Approx(hilbert_distance(d, p, q)).epsilon(1e-9));
}

TEST_CASE("gromov_product: examples") {
  const auto disk = ConvexDomain::disk();
  const Point2 x{0.5, 0}, y{-0.5, 0}, w{0, 0.5};
  CHECK(gromov_product(disk, x, x, w) == doctest::Approx(hilbert_distance(disk, x, w)).epsilon(1e-14));
  CHECK(gromov_product(disk, x, y, x) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  const double oracle = 0.5 * (klein_distance(x, w) + klein_distance(y, w) - klein_distance(x, y));
  CHECK(std::abs(gromov_product(disk, x, y, w) - oracle) < 1e-9);
}

TEST_CASE("point_to_segment_distance") {
  const auto disk = ConvexDomain::disk();
  CHECK(point_to_segment_distance(disk, {0.1, 0}, {-0.5, 0}, {0.5, 0}) == doctest::Approx(0.0).scale(1));
  // Perpendicular foot at the origin: distance from (0, 0.5) to the x-axis.
  const double v = point_to_segment_distance(disk, {0, 0.5}, {-0.5, 0}, {0.5, 0});
  CHECK(std::abs(v - std::atanh(0.5)) < 1e-9);
  const double mirrored = point_to_segment_distance(disk, {-0.2, 0.5}, {-0.7, 0.1}, {0.4, -0.3});
  const double original = point_to_segment_distance(disk, {0.2, 0.5}, {0.7, 0.1}, {-0.4, -0.3});
  CHECK(std::abs(mirrored - original) < 1e-9);
  CHECK_THROWS_AS(point_to_segment_distance(disk, {0, 0}, {-0.5, 0}, {1.5, 0}), GeometryError);

  // Against a 10^4 point grid on non-round domains, endpoints on the boundary.
  RandomStream rng(9);
  for (const auto& d : domain_corpus()) {
    CAPTURE(d.label());
    for (int k = 0; k < 3; ++k) {
      const Point2 p = random_interior(d, rng, 0.9);
      const Point2 s0 = d.boundary_point(d.param_period() * rng.uniform());
      const Point2 s1 = d.boundary_point(d.param_period() * rng.uniform());
      if (!d.contains(lerp(s0, s1, 0.5))) continue;
      double grid = 1e300;
      for (int i = 1; i < 10000; ++i) {
        const Point2 s = lerp(s0, s1, i / 10000.0);
        if (d.contains(s)) grid = std::min(grid, hilbert_distance(d, p, s));
      }
      CHECK(point_to_segment_distance(d, p, s0, s1) <= grid + 1e-6);
      CHECK(point_to_segment_distance(d, p, s0, s1) >= grid - 1e-4);
    }
  }
}

TEST_CASE("invariants: metric axioms") {
  RandomStream rng(21);
  for (const auto& d : domain_corpus()) {
    CAPTURE(d.label());
    for (int i = 0; i < 200; ++i) {
      const Point2 p = random_interior(d, rng, 0.99);
      const Point2 q = random_interior(d, rng, 0.99);
      const Point2 r = random_interior(d, rng, 0.99);
      const double pq = hilbert_distance(d, p, q);
      CHECK(std::abs(pq - hilbert_distance(d, q, p)) <= 1e-10 * std::max(1.0, pq));
      CHECK(pq <= hilbert_distance(d, p, r) + hilbert_distance(d, r, q) + 1e-9);
      CHECK(pq > 0.0);
      CHECK(hilbert_distance(d, p, p) == 0.0);
    }
  }
}

TEST_CASE("invariants: projective invariance") {
  RandomStream rng(31);
  const auto base = domain_corpus();
  int tested = 0;
  for (int i = 0; tested < 100 && i < 1000; ++i) {
    const auto& d = base[i % base.size()];
    const ProjectiveMap h = random_map(rng);
    std::optional<ConvexDomain> image;
    try {
      image = projective_image(d, h);
    } catch (const GeometryError&) {
      continue;
    }
    ++tested;
    const Point2 p = random_interior(d, rng, 0.99);
    const Point2 q = random_interior(d, rng, 0.99);
    const double a = hilbert_distance(d, p, q);
    const double b = hilbert_distance(*image, h.apply(p), h.apply(q));
    CHECK(std::abs(a - b) <= 1e-6 * (1.0 + a));
  }
  CHECK(tested == 100);
}

TEST_CASE("invariants: comparison for nested domains") {
  struct Pair {
    ConvexDomain inner, outer;
  };
  const std::vector<Pair> pairs{
      {ConvexDomain::disk(), ConvexDomain::disk({0.1, 0}, 1.3)},
      {ConvexDomain::pball(4.0), ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}})},
      {ConvexDomain::pball(1.5), ConvexDomain::disk()},
      {ConvexDomain::regular_polygon(6, 0.9), ConvexDomain::pball(3.0)},
  };
  RandomStream rng(41);
  for (const auto& [a, b] : pairs) {
    for (int i = 0; i < 200; ++i) {
      const Point2 p = random_interior(a, rng, 0.999);
      const Point2 q = random_interior(a, rng, 0.999);
      const Vec2 v = random_direction(rng);
      CHECK(finsler_norm(b, p, v) <= finsler_norm(a, p, v) + 1e-9);
      CHECK(hilbert_distance(b, p, q) <= hilbert_distance(a, p, q) + 1e-9);
    }
  }
}

TEST_CASE("sampler: deterministic and inside the domain") {
  SamplerConfig cfg;
  cfg.budget = 200;
  cfg.seed = 17;
  for (const auto& d : domain_corpus()) {
    const auto a = sample_triangles(d, cfg);
    const auto b = sample_triangles(d, cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        CHECK(a[i][k].x == b[i][k].x);
        CHECK(a[i][k].y == b[i][k].y);
        CHECK(d.contains(a[i][k]));
      }
    }
  }
}

TEST_CASE("delta_four_point: degenerate, brute force and monotone") {
  const auto disk = ConvexDomain::disk();
  const Point2 p{0.3, 0.1};
  CHECK(four_point_delta(disk, {p, p, p, p}) == 0.0);
  CHECK(four_point_delta(disk, {p, p, Point2{-0.2, 0.4}, Point2{0.0, -0.7}}) == 0.0);

  SamplerConfig cfg;
  cfg.budget = 100000;
  cfg.seed = 2;
  const auto quads = sample_quadruples(disk, cfg);
  const DeltaEstimate est = delta_four_point(disk, quads);
  double brute = 0.0;
  for (const auto& q : quads) {
    std::array<int, 4> idx{0, 1, 2, 3};
    do {
      brute = std::max(brute, four_point_defect(disk, {{q[idx[0]], q[idx[1]], q[idx[2]], q[idx[3]]}}));
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  CHECK(est.delta_hat == brute);
  CHECK(est.samples_used == quads.size());
  // Hyperbolic plane: four-point constant is at most ln 3 (ideal quadrilaterals).
  CHECK(est.delta_hat < std::log(3.0) + 1e-9);
  CHECK(std::abs(four_point_defect(disk, est.four_point) - est.delta_hat) < 1e-9);

  const std::vector<std::array<Point2, 4>> half(quads.begin(), quads.begin() + 50000);
  CHECK(delta_four_point(disk, half).delta_hat <= est.delta_hat);
}

TEST_CASE("delta_four_point: square corners") {
  const auto square = ConvexDomain::unit_square();
  // Two opposite corners and two edge midpoints, pushed to depth 1e-6.
  auto at = [&](double param) { return PointSampler::point_at(square, param, 1.0, 1e-6); };
  const double fixed = four_point_delta(square, {at(0.0), at(0.5), at(0.625), at(0.375)});
  CHECK(fixed == doctest::Approx(3.2805909685).epsilon(1e-8));

  SamplerConfig cfg;
  cfg.budget = 20000;
  cfg.seed = 5;
  cfg.focus_params = {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875};
  cfg.focus_probability = 0.9;
  const DeltaEstimate est = delta_four_point(square, cfg);
  CHECK(est.delta_hat > 3.0);
  CHECK(std::abs(four_point_defect(square, est.four_point) - est.delta_hat) < 1e-9);
}

TEST_CASE("delta_thin: degenerate and disk") {
  const auto disk = ConvexDomain::disk();
  CHECK(triangle_thinness(disk, {Point2{-0.5, 0}, Point2{0, 0}, Point2{0.5, 0}}) == 0.0);

  SamplerConfig cfg;
  cfg.budget = 300;
  cfg.seed = 8;
  const DeltaEstimate est = delta_thin(disk, cfg);
  // Ideal triangles in the hyperbolic plane are ln(1 + sqrt 2)-thin in this sense.
  CHECK(est.delta_hat < std::log(1.0 + std::sqrt(2.0)) + 1e-6);
  CHECK(est.delta_hat > 0.5);
  CHECK(std::abs(thin_defect(disk, est.thin) - est.delta_hat) < 1e-9);

  // Brute force: a dense grid along each side of the witness triangle, then a
  // second dense grid around the best node.
  const auto& v = est.thin.vertices;
  auto defect_at = [&](int k, double t) {
    return thin_defect(disk, ThinWitness{v, k, t, lerp(v[(k + 1) % 3], v[(k + 2) % 3], t)});
  };
  double brute = 0.0;
  for (int k = 0; k < 3; ++k) {
    double best_t = 0.0;
    double best = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double f = defect_at(k, i / 2000.0);
      if (f > best) best = f, best_t = i / 2000.0;
    }
    for (int i = -1000; i <= 1000; ++i) {
      const double t = best_t + i * 1e-6;
      if (t >= 0.0 && t <= 1.0) best = std::max(best, defect_at(k, t));
    }
    brute = std::max(brute, best);
  }
  CHECK(est.delta_hat >= brute - 1e-9);
  CHECK(est.delta_hat <= brute + 1e-6);
}

TEST_CASE("delta_thin: square corners grow past 2") {
  const auto square = ConvexDomain::unit_square();
  double previous = 0.0;
  for (double e : {1e-2, 1e-4, 1e-6}) {
    const double t = triangle_thinness(square, {Point2{e, e}, Point2{1 - e, e}, Point2{1 - e, 1 - e}});
    CHECK(t > previous);
    previous = t;
  }
  CHECK(previous > 2.0);
}
