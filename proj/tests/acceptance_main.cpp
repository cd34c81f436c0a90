#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "stein1d/acceptance.hpp"

// One line per criterion; exit status is nonzero if any fails. Optional arguments select ids.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= stein1d::kCriterionCount; ++i) ids.push_back(i);
  int failed = 0;
  for (int id : ids) {
    const stein1d::CriterionResult r = stein1d::run_criterion(id);
    std::printf("[%s] criterion %2d %-40s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
  return failed == 0 ? 0 : 1;
}
