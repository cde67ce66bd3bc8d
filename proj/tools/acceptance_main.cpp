// Prints one PASS/FAIL line per acceptance criterion. With an argument, runs only
// that criterion. Exits nonzero when any selected criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "sirdelay/acceptance.hpp"

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  bool all = true;
  bool ran = false;
  for (int id : sirdelay::acceptance::criterion_ids()) {
    if (only != 0 && id != only) continue;
    const auto r = sirdelay::acceptance::run_criterion(id);
    std::cout << sirdelay::acceptance::format_line(r) << std::endl;
    all = all && r.passed;
    ran = true;
  }
  if (!ran) {
    std::cerr << "no criterion " << argv[1] << '\n';
    return 2;
  }
  return all ? 0 : 1;
}
