// Acceptance gate: runs every release check and prints one line per
// criterion. Exit status is 0 only when all of them pass, so CI can use
// this binary directly.
#include <cstdio>

#include "verify_suite.hpp"

int main() {
  auto results = limset_cli::run_verify_suite("", nullptr);
  int failed = 0;
  int index = 0;
  for (const auto& r : results) {
    std::printf("criterion %2d  %s\n", ++index,
                limset_cli::format_check_line(r).c_str());
    if (!r.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
