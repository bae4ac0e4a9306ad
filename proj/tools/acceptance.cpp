#include "suites.hpp"

#include <cstdio>

// One line per acceptance criterion; exits 1 if any fails.
int main() {
  int index = 0;
  bool all = true;
  for (const auto& name : hilbert::tools::suite_names()) {
    const auto r = hilbert::tools::run_suite(name);
    all = all && r.passed;
    std::printf("%s %d %s (%.1f s): %s\n", r.passed ? "PASS" : "FAIL", ++index, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
