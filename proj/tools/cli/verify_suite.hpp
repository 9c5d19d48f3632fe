#ifndef LIMSET_CLI_VERIFY_SUITE_HPP
#define LIMSET_CLI_VERIFY_SUITE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace limset_cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // one-line numeric evidence
  double seconds = 0.0;
};

// "[PASS] name  detail (1.23 s)"
std::string format_check_line(const CheckResult& r);

// Runs the fixed-seed verification checks whose names contain `filter`
// (empty matches all), in declaration order. When `progress` is non-null a
// formatted line is streamed there as each check finishes. A check that
// throws is reported as a failure, never as a crash of the suite.
std::vector<CheckResult> run_verify_suite(const std::string& filter = "",
                                          std::ostream* progress = nullptr);

}  // namespace limset_cli

#endif
