// Runs the default lemma suite against a library built with a corrupted
// constant. Prints the failure count; exit 0 iff some check failed.

#include <cstdlib>
#include <iostream>

#include "relesc/harness.hpp"

int main(int argc, char** argv) {
  relesc::SuiteConfig c;
  c.trials = argc > 1 ? std::atoi(argv[1]) : 500;
  c.seed = 42;
  const relesc::SuiteReport r = relesc::run_suite(c);
  std::cout << r.failures.size() << "\n";
  return r.failures.empty() ? 1 : 0;
}
