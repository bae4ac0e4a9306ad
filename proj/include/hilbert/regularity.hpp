#pragma once

#include "hilbert/convex_domain.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hilbert {

/// Samples of f on the uniform grid x_i = -2a + 4a i / (n - 1), i = 0..n-1.
/// n is odd with (n - 1) divisible by 4, so 0 and +-a are grid points.
struct SampledFunction {
  double a = 1.0;
  std::vector<double> values;
  /// Derivative samples; empty when unknown.
  std::vector<double> derivative;

  std::size_t size() const { return values.size(); }
  double step() const { return 4.0 * a / static_cast<double>(values.size() - 1); }
  double x(std::size_t i) const { return -2.0 * a + step() * static_cast<double>(i); }
  std::size_t index_of(double x) const;
};

constexpr int kRegularityGrid = 1025;

/// Throws InvalidArgument for a <= 0 or a bad grid size (n < 65 or (n - 1) % 4 != 0).
SampledFunction sample_function(const std::function<double(double)>& f, double a, int n = kRegularityGrid,
                                const std::function<double(double)>& df = nullptr);

/// Central differences at grid spacing, one-sided at the ends.
std::vector<double> central_derivative(const SampledFunction& f);

/// |f(x + h) - f(x)| / |f(x) - f(x - h)| at grid index i and step k. Both
/// increments below 1e-14 give 1; only the denominator below 1e-14 gives inf.
double qs_ratio(const std::vector<double>& values, std::size_t i, std::size_t k);

/// Sup of qs_ratio over all grid pairs with x +- h in range.
double qs_constant(const SampledFunction& f);
double qs_constant(const std::vector<double>& values);

/// Sup over grid pairs of D_x(h) / D_x(-h), D_x(h) = f(x + h) - f(x) - f'(x) h,
/// with the same degenerate rules. Uses central differences without
/// derivative samples. Throws NotConvex.
double qsc_constant(const SampledFunction& f);

/// (4H(H + 1))^((1 + a) / a).
double chain_h2(double h, double a);
/// 1 + log2(1 + 1 / h2).
double chain_alpha(double h2);

struct RegularityReport {
  double a = 0.0;
  double H = 1.0;
  double K = 1.0;
  double H2 = 1.0;
  double alpha = 1.0;
  double M = 0.0;  // max(f(-a), f(a))
  /// min over grid x in [-a, a] \ {0} of 160 (H2 + 1) M |x|^alpha - f(x).
  double bound_margin = 0.0;
  bool passed = false;  // bound_margin >= -1e-9
  bool strictly_convex = true;
  std::optional<double> alpha_fit;
};

/// Power bound f(x) <= 160 (H2 + 1) M(f) |x|^alpha on [-a, a].
/// Throws PreconditionViolated when f(0) != 0 or f < 0 somewhere.
RegularityReport holder_bound_check(const SampledFunction& f, double H);

struct DerivativeHolderCheck {
  double K = 1.0;
  double alpha = 2.0;
  /// min over grid pairs x != y of 160 (1 + K) |f|_inf |x - y|^(alpha - 1) - |f'(x) - f'(y)|.
  double margin = 0.0;
  bool passed = false;
};

/// Throws NotConvex.
DerivativeHolderCheck derivative_holder_check(const SampledFunction& f, double K);

/// Extracts the boundary graph over [-rho, rho] at the tangency point
/// (a = rho / 2), measures H by qsc_constant and runs the bound check.
/// A graph vanishing away from 0 is reported as not strictly convex.
RegularityReport boundary_regularity_report(const ConvexDomain& domain, const Point2& tangency, double rho = 0.5,
                                            int samples = kRegularityGrid);

}  // namespace hilbert
