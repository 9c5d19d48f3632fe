#ifndef LIMSET_CLI_COMMANDS_HPP
#define LIMSET_CLI_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace limset_cli {

// Exit-code contract shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // bad input, config, or files
inline constexpr int kExitUndecided = 2;   // verdicts present but undecided
inline constexpr int kExitViolations = 3;  // property/containment failures

struct CommandFlags {
  std::string config_path;
  std::string out_dir;  // empty: ./runs/<config hash>/
  bool json_out = false;
  bool quiet = false;
  Overrides ov;
};

// Membership/alpha queries from the config's queries section; writes
// verdicts.json, verdicts.csv, predicted.json, manifest.json.
int cmd_criteria(const CommandFlags& flags, std::ostream& out,
                 std::ostream& err);

// Cluster simulation + containment; writes report.json, points.csv,
// net.csv, snapshots.csv, predicted.json, containment.json, scatter.svg
// (d = 2), paths.svg, manifest.json. Result files are a pure function of
// the resolved config minus the worker count.
int cmd_simulate(const CommandFlags& flags, std::ostream& out,
                 std::ostream& err);

struct Example8Flags {
  CommandFlags base;
  std::optional<int> k_max;
  std::optional<std::string> mode;  // "exact" | "scaled"
  std::optional<double> kappa;
};

// Ladder-model verification: block identities, mass bound, level envelope;
// in scaled mode additionally a simulation + containment run.
int cmd_example8(const Example8Flags& flags, std::ostream& out,
                 std::ostream& err);

struct TautStringFlags {
  std::string input_csv;
  double epsilon = 0.0;
  std::string out_path;  // empty: "<input>.min.csv"
  bool json_out = false;
  bool quiet = false;
};

// Reads a scalar grid function, minimizes energy in the sup-norm tube,
// writes the minimizer CSV, and prints both energies.
int cmd_tautstring(const TautStringFlags& flags, std::ostream& out,
                   std::ostream& err);

struct VerifyFlags {
  std::string filter;  // substring of check names; empty runs everything
  bool json_out = false;
  bool quiet = false;
};

// Runs the acceptance checks with fixed seeds; one line per check.
int cmd_verify(const VerifyFlags& flags, std::ostream& out, std::ostream& err);

}  // namespace limset_cli

#endif
