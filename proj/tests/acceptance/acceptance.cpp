// One PASS/FAIL line per acceptance criterion. Usage: acceptance [--drops N] [--seed S] [id...]
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "uavcov/validation.hpp"

int main(int argc, char** argv) {
  uavcov::ValidationOptions opt;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--drops" && i + 1 < argc) {
      opt.drops = std::stol(argv[++i]);
    } else if (a == "--seed" && i + 1 < argc) {
      opt.seed = std::stoull(argv[++i]);
    } else {
      ids.push_back(std::stoi(a));
    }
  }
  if (ids.empty())
    for (int i = 1; i <= uavcov::kAcceptanceCount; ++i) ids.push_back(i);
  int failed = 0;
  for (int id : ids) {
    const auto r = uavcov::acceptance_criterion(id, opt);
    uavcov::print_results(std::cout, {r});
    std::cout.flush();
    failed += r.pass ? 0 : 1;
  }
  std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
