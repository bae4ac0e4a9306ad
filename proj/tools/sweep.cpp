#include "sweep.hpp"

#include "hilbert/errors.hpp"
#include "hilbert/metric.hpp"

#include <cmath>
#include <cstdio>

namespace hilbert::tools {

ConvexDomain family_member(const std::string& family, double param) {
  if (family == "pball") {
    if (!(param >= 1.0) || !std::isfinite(param)) throw GeometryError(ErrorKind::InvalidArgument, "pball needs p >= 1");
    return ConvexDomain::pball(param);
  }
  if (family == "polygon") {
    if (!(param >= 3.0) || param != std::floor(param) || param > 1e6) {
      throw GeometryError(ErrorKind::InvalidArgument, "polygon needs an integer side count >= 3");
    }
    return ConvexDomain::regular_polygon(static_cast<int>(param));
  }
  throw GeometryError(ErrorKind::InvalidArgument, "unknown family \"" + family + "\"");
}

SweepRow sweep_row(const ConvexDomain& domain, double param, const SweepConfig& config) {
  SamplerConfig delta;
  delta.budget = config.delta_budget;
  delta.seed = config.seed;
  TriangleSamplerConfig area;
  area.budget = config.area_budget;
  area.seed = config.seed;
  area.focus_params = default_focus_params(domain);
  area.focus_probability = config.focus_probability;
  area.focus_jitter = config.focus_jitter;
  TriangleAreaOptions options;
  options.quadrature.tol = config.tol;
  options.quadrature.max_refinements = config.max_refinements;

  SweepRow row;
  row.label = domain.label();
  row.param = param;
  row.seed = config.seed;
  row.delta_thin = delta_thin(domain, delta).delta_hat;
  row.delta_4pt = delta_four_point(domain, delta).delta_hat;
  const SupAreaResult sup = sup_area_search(domain, area, options);
  row.sup_area = sup.best_area.value;
  row.diverged = sup.diverged;
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.grid.empty()) throw GeometryError(ErrorKind::InvalidArgument, "parameter grid is empty");
  std::vector<ConvexDomain> domains;
  for (double param : config.grid) domains.push_back(family_member(config.family, param));
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < domains.size(); ++i) rows.push_back(sweep_row(domains[i], config.grid[i], config));
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%zu,%llu", r.param, r.delta_thin, r.delta_4pt, r.sup_area,
                  r.diverged, static_cast<unsigned long long>(r.seed));
    out << '"' << r.label << '"' << ',' << buf << '\n';
  }
}

}  // namespace hilbert::tools
