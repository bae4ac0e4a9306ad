#pragma once

#include "hilbert/convex_domain.hpp"
#include "hilbert/triangles.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace hilbert::tools {

struct SweepRow {
  std::string label;
  double param = 0.0;
  double delta_thin = 0.0;
  double delta_4pt = 0.0;
  double sup_area = 0.0;  // a lower bound when diverged > 0
  std::size_t diverged = 0;
  std::uint64_t seed = 0;
};

struct SweepConfig {
  std::string family = "pball";  // "pball" (param p) or "polygon" (regular n-gon)
  std::vector<double> grid;
  std::size_t delta_budget = 20;
  std::size_t area_budget = 32;
  std::uint64_t seed = 7;
  double focus_probability = 0.6;
  double focus_jitter = 0.01;
  double tol = 1e-3;
  /// Per-piece refinement cap; pieces hugging a nearly flat arc stop here and
  /// are reported as diverged.
  std::size_t max_refinements = 200;
};

/// Throws InvalidArgument for an unknown family or a bad parameter.
ConvexDomain family_member(const std::string& family, double param);

SweepRow sweep_row(const ConvexDomain& domain, double param, const SweepConfig& config);
/// Throws InvalidArgument for an empty grid.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

constexpr const char* kSweepHeader = "label,param,delta_thin,delta_4pt,sup_area,diverged,seed";
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace hilbert::tools
