#include "hilbert/regularity.hpp"

#include "hilbert/errors.hpp"
#include "hilbert/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hilbert {
namespace {

constexpr double kTiny = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

double degenerate_ratio(double num, double den) {
  num = std::abs(num);
  den = std::abs(den);
  if (den < kTiny) return num < kTiny ? 1.0 : kInf;
  return num / den;
}

void require_convex(const SampledFunction& f) {
  if (!midpoint_convex(f.values)) throw GeometryError(ErrorKind::NotConvex, "sampled function is not convex");
}

const std::vector<double>& derivative_of(const SampledFunction& f, std::vector<double>& scratch) {
  if (f.derivative.size() == f.size()) return f.derivative;
  scratch = central_derivative(f);
  return scratch;
}

}  // namespace

std::size_t SampledFunction::index_of(double xv) const {
  const double i = std::round((xv + 2.0 * a) / step());
  return static_cast<std::size_t>(std::clamp(i, 0.0, static_cast<double>(values.size() - 1)));
}

SampledFunction sample_function(const std::function<double(double)>& f, double a, int n,
                                const std::function<double(double)>& df) {
  if (!(a > 0.0) || n < 65 || (n - 1) % 4 != 0) {
    throw GeometryError(ErrorKind::InvalidArgument, "grid needs a > 0, n >= 65 and (n - 1) divisible by 4");
  }
  SampledFunction out;
  out.a = a;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = f(out.x(i));
  if (df) {
    out.derivative.resize(n);
    for (int i = 0; i < n; ++i) out.derivative[i] = df(out.x(i));
  }
  return out;
}

std::vector<double> central_derivative(const SampledFunction& f) {
  const std::size_t n = f.size();
  const double h = f.step();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
  d[0] = (f.values[1] - f.values[0]) / h;
  d[n - 1] = (f.values[n - 1] - f.values[n - 2]) / h;
  return d;
}

double qs_ratio(const std::vector<double>& v, std::size_t i, std::size_t k) {
  return degenerate_ratio(v[i + k] - v[i], v[i] - v[i - k]);
}

double qs_constant(const std::vector<double>& v) {
  double sup = 1.0;
  const std::size_t n = v.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t k = 1; k <= std::min(i, n - 1 - i); ++k) sup = std::max(sup, qs_ratio(v, i, k));
  }
  return sup;
}

double qs_constant(const SampledFunction& f) { return qs_constant(f.values); }

double qsc_constant(const SampledFunction& f) {
  require_convex(f);
  std::vector<double> scratch;
  const auto& d = derivative_of(f, scratch);
  const auto& v = f.values;
  const std::size_t n = f.size();
  const double step = f.step();
  double sup = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t k = 1; k <= std::min(i, n - 1 - i); ++k) {
      const double h = step * static_cast<double>(k);
      const double up = v[i + k] - v[i] - d[i] * h;
      const double down = v[i - k] - v[i] + d[i] * h;
      sup = std::max({sup, degenerate_ratio(up, down), degenerate_ratio(down, up)});
    }
  }
  return sup;
}

double chain_h2(double h, double a) { return std::pow(4.0 * h * (h + 1.0), (1.0 + a) / a); }

double chain_alpha(double h2) { return 1.0 + std::log1p(1.0 / h2) / std::numbers::ln2; }

RegularityReport holder_bound_check(const SampledFunction& f, double H) {
  const auto& v = f.values;
  double scale = 0.0;
  for (double y : v) scale = std::max(scale, std::abs(y));
  const double tol = 1e-12 * (1.0 + scale);
  const std::size_t center = f.size() / 2;
  if (std::abs(v[center]) > tol) throw GeometryError(ErrorKind::PreconditionViolated, "f(0) is not 0");
  if (*std::min_element(v.begin(), v.end()) < -tol) {
    throw GeometryError(ErrorKind::PreconditionViolated, "f is negative somewhere");
  }
  RegularityReport r;
  r.a = f.a;
  r.H = H;
  r.H2 = chain_h2(H, f.a);
  r.K = r.H2;
  r.alpha = chain_alpha(r.H2);
  r.M = std::max(v[f.index_of(-f.a)], v[f.index_of(f.a)]);
  const double mu = 160.0 * (r.H2 + 1.0) * r.M;
  r.bound_margin = kInf;
  for (std::size_t i = f.index_of(-f.a); i <= f.index_of(f.a); ++i) {
    if (i == center) continue;
    r.bound_margin = std::min(r.bound_margin, mu * std::pow(std::abs(f.x(i)), r.alpha) - v[i]);
  }
  r.passed = r.bound_margin >= -1e-9;
  return r;
}

DerivativeHolderCheck derivative_holder_check(const SampledFunction& f, double K) {
  require_convex(f);
  std::vector<double> scratch;
  const auto& d = derivative_of(f, scratch);
  double sup_norm = 0.0;
  for (double y : f.values) sup_norm = std::max(sup_norm, std::abs(y));
  DerivativeHolderCheck out;
  out.K = K;
  out.alpha = chain_alpha(K);
  const double c = 160.0 * (1.0 + K) * sup_norm;
  const std::size_t n = f.size();
  out.margin = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = f.step() * static_cast<double>(j - i);
      out.margin = std::min(out.margin, c * std::pow(gap, out.alpha - 1.0) - std::abs(d[j] - d[i]));
    }
  }
  out.passed = out.margin >= -1e-9;
  return out;
}

RegularityReport boundary_regularity_report(const ConvexDomain& domain, const Point2& tangency, double rho,
                                            int samples) {
  const GraphStrip g = boundary_graph(domain, tangency, tangent_frame(domain, tangency), rho, samples);
  SampledFunction f;
  f.a = rho / 2.0;
  f.values = g.f;
  RegularityReport r = holder_bound_check(f, qsc_constant(f));
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    if (std::abs(g.x[i]) >= rho / 100.0 && !(g.f[i] > 1e-13)) r.strictly_convex = false;
  }
  try {
    r.alpha_fit = graph_alpha_fit(g).alpha;
  } catch (const GeometryError& e) {
    if (e.kind() != ErrorKind::InsufficientSignal) throw;
  }
  return r;
}

}  // namespace hilbert
