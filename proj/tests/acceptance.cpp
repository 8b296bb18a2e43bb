// Acceptance gate: one PASS/FAIL line per reproduction criterion.
// Usage: acceptance [group|number]

#include <iostream>
#include <string>

#include "fractalkit/acceptance.hpp"

int main(int argc, char** argv) {
  std::string filter = argc > 1 ? argv[1] : "";
  auto results = fractalkit::acceptance::run(filter);
  fractalkit::acceptance::print(std::cout, results);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
