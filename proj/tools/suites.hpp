#pragma once

#include <string>
#include <vector>

namespace hilbert::tools {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Names in acceptance order: klein, tangent-wedge, comparison, projective,
/// dichotomy, ball-growth, regularity, graph, normalize.
const std::vector<std::string>& suite_names();

/// Throws InvalidArgument for an unknown name.
SuiteResult run_suite(const std::string& name);

}  // namespace hilbert::tools
