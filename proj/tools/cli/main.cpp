#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void add_common(CLI::App* sub, limset_cli::CommandFlags& flags,
                bool with_config = true) {
  if (with_config)
    sub->add_option("--config", flags.config_path, "JSON config document")
        ->required();
  sub->add_option("--out", flags.out_dir,
                  "output directory (default runs/<config hash>)");
  sub->add_flag("--json", flags.json_out, "machine-readable stdout");
  sub->add_flag("--quiet", flags.quiet, "suppress progress output");
  sub->add_option("--seed", flags.ov.seed, "override simulation.seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "limset: cluster sets of normalized partial sums - membership "
      "criteria, simulation, and verification"};
  app.require_subcommand(1);

  limset_cli::CommandFlags criteria_flags;
  auto* criteria = app.add_subcommand(
      "criteria", "membership and scale queries from a config's query list");
  add_common(criteria, criteria_flags);

  limset_cli::CommandFlags simulate_flags;
  auto* simulate = app.add_subcommand(
      "simulate", "cluster simulation with containment checks");
  add_common(simulate, simulate_flags);
  simulate->add_option("--n-max", simulate_flags.ov.n_max,
                       "override simulation.n_max");
  simulate->add_option("--streams", simulate_flags.ov.streams,
                       "override simulation.streams (replica count)");
  simulate->add_option("--workers", simulate_flags.ov.workers,
                       "override simulation.workers (thread cap; results "
                       "never depend on it)");

  limset_cli::Example8Flags ladder_flags;
  auto* ladder = app.add_subcommand(
      "example8", "heavy-tail ladder verification (and simulation when "
                  "the model is sampleable)");
  add_common(ladder, ladder_flags.base);
  ladder->add_option("--k-max", ladder_flags.k_max, "override model.k_max");
  ladder->add_option("--mode", ladder_flags.mode, "exact | scaled");
  ladder->add_option("--kappa", ladder_flags.kappa,
                     "override model.kappa (scaled exponent compression)");

  limset_cli::TautStringFlags taut_flags;
  auto* taut = app.add_subcommand(
      "tautstring", "energy minimizer in a sup-norm tube around a CSV path");
  taut->add_option("input", taut_flags.input_csv, "scalar grid function CSV")
      ->required();
  taut->add_option("epsilon", taut_flags.epsilon, "tube radius")->required();
  taut->add_option("--out", taut_flags.out_path,
                   "minimizer CSV path (default <input>.min.csv)");
  taut->add_flag("--json", taut_flags.json_out, "machine-readable stdout");
  taut->add_flag("--quiet", taut_flags.quiet, "suppress output");

  limset_cli::VerifyFlags verify_flags;
  auto* verify = app.add_subcommand(
      "verify", "run the fixed-seed verification suite");
  verify->add_option("--filter", verify_flags.filter,
                     "run only checks whose name contains this substring");
  verify->add_flag("--json", verify_flags.json_out, "machine-readable stdout");
  verify->add_flag("--quiet", verify_flags.quiet,
                   "suppress per-check progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // collapse CLI11's exit-code zoo onto the documented contract:
    // 0 for --help/--version, 1 for any bad invocation
    int code = app.exit(e);
    return code == 0 ? limset_cli::kExitOk : limset_cli::kExitUsage;
  }

  if (criteria->parsed())
    return limset_cli::cmd_criteria(criteria_flags, std::cout, std::cerr);
  if (simulate->parsed())
    return limset_cli::cmd_simulate(simulate_flags, std::cout, std::cerr);
  if (ladder->parsed())
    return limset_cli::cmd_example8(ladder_flags, std::cout, std::cerr);
  if (taut->parsed())
    return limset_cli::cmd_tautstring(taut_flags, std::cout, std::cerr);
  return limset_cli::cmd_verify(verify_flags, std::cout, std::cerr);
}
