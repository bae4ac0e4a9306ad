#pragma once

#include <cmath>
#include <limits>

namespace hilbert {

struct ScalarMinimum {
  double argmin = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

/// Minimizes f on [lo, hi]: uniform grid pre-scan with `grid` intervals, then
/// golden-section search on the bracket around the best grid node. Non-finite
/// values of f are treated as +infinity, so f may blow up at the ends.
template <class F>
ScalarMinimum scan_golden_minimize(F&& f, double lo, double hi, int grid = 256, double tol = 1e-12) {
  auto eval = [&](double t) {
    const double v = f(t);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  ScalarMinimum best;
  int best_i = 0;
  const double h = (hi - lo) / grid;
  for (int i = 0; i <= grid; ++i) {
    const double t = (i == grid) ? hi : lo + i * h;
    const double v = eval(t);
    if (v < best.value) {
      best = {t, v};
      best_i = i;
    }
  }
  if (!std::isfinite(best.value)) return best;

  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo + std::max(0, best_i - 1) * h;
  double b = (best_i + 1 >= grid) ? hi : lo + (best_i + 1) * h;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
  }
  if (fc < best.value) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  return best;
}

template <class F>
ScalarMinimum scan_golden_maximize(F&& f, double lo, double hi, int grid = 256, double tol = 1e-12) {
  auto neg = [&](double t) {
    const double v = f(t);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };
  ScalarMinimum m = scan_golden_minimize(neg, lo, hi, grid, tol);
  m.value = -m.value;
  return m;
}

}  // namespace hilbert
