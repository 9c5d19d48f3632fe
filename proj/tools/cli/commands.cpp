#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "limset/errors.hpp"
#include "limset/report_io.hpp"
#include "limset/taut_string.hpp"
#include "manifest.hpp"
#include "svg.hpp"
#include "verify_suite.hpp"

#ifndef LIMSET_VERSION
#define LIMSET_VERSION "0.0.0"
#endif

namespace limset_cli {

namespace {

using nlohmann::json;

std::string run_dir(const CommandFlags& flags, const std::string& command,
                    const RunConfig& rc) {
  if (!flags.out_dir.empty()) return flags.out_dir;
  // the command participates in the hash so runs of different commands on
  // the same config never share a directory
  json view = rc.resolved;
  if (view.contains("simulation")) view["simulation"].erase("workers");
  return "runs/" + to_hex(fnv1a64(command + "\n" + view.dump()));
}

RunManifest start_manifest(const std::string& command, const RunConfig& rc) {
  RunManifest m;
  m.command = command;
  m.version = LIMSET_VERSION;
  m.config_hash = rc.hash_hex();
  m.config = rc.resolved;
  m.started_at = utc_now_iso8601();
  return m;
}

void finish_manifest(RunManifest& m, const std::string& dir) {
  m.finished_at = utc_now_iso8601();
  write_file(dir, "manifest.json", m.to_json());
}

int usage_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return kExitUsage;
}

}  // namespace

int cmd_criteria(const CommandFlags& flags, std::ostream& out,
                 std::ostream& err) {
  try {
    RunConfig rc = load_config(flags.config_path, flags.ov, true);
    std::string dir = run_dir(flags, "criteria", rc);
    RunManifest manifest = start_manifest("criteria", rc);

    auto sets = limset::predicted_sets(*rc.model, rc.seq, rc.criteria);

    std::vector<limset::QueryVerdict> rows;
    for (std::size_t i = 0; i < rc.point_queries.size(); ++i)
      rows.push_back({"point[" + std::to_string(i) + "]",
                      limset::point_membership(rc.point_queries[i], *rc.model,
                                               rc.seq, rc.criteria)});
    for (std::size_t i = 0; i < rc.function_queries.size(); ++i)
      rows.push_back({"function[" + std::to_string(i) + "]",
                      limset::function_membership(rc.function_queries[i],
                                                  *rc.model, rc.seq,
                                                  rc.criteria)});

    long long member = 0, non_member = 0, undecided = 0;
    for (const auto& r : rows) {
      switch (r.verdict.status) {
        case limset::Membership::member: ++member; break;
        case limset::Membership::non_member: ++non_member; break;
        case limset::Membership::undecided: ++undecided; break;
      }
    }

    std::string verdicts_json = limset::verdicts_to_json(rows);
    manifest.files.push_back(write_file(dir, "verdicts.json", verdicts_json));
    manifest.files.push_back(
        write_file(dir, "verdicts.csv", limset::verdicts_to_csv(rows)));
    manifest.files.push_back(write_file(dir, "predicted.json",
                                        limset::predicted_sets_to_json(sets)));
    manifest.summary = {{"queries", rows.size()},
                        {"member", member},
                        {"non_member", non_member},
                        {"undecided", undecided},
                        {"alpha0", sets.alpha.alpha0}};
    finish_manifest(manifest, dir);

    if (flags.json_out) {
      out << verdicts_json;
    } else if (!flags.quiet) {
      out << "alpha0 = " << sets.alpha.alpha0 << "  bracket ["
          << sets.alpha.lo << ", " << sets.alpha.hi << "]\n";
      for (const auto& r : rows) {
        out << r.query << ": " << to_string(r.verdict.status);
        if (!std::isnan(r.verdict.flip_epsilon))
          out << " (divergent down to epsilon = " << r.verdict.flip_epsilon
              << ")";
        out << "\n";
      }
      out << "results: " << dir << "\n";
    }
    return undecided > 0 ? kExitUndecided : kExitOk;
  } catch (const limset::error& e) {
    return usage_error(err, e);
  }
}

int cmd_simulate(const CommandFlags& flags, std::ostream& out,
                 std::ostream& err) {
  try {
    RunConfig rc = load_config(flags.config_path, flags.ov, true);
    std::string dir = run_dir(flags, "simulate", rc);
    RunManifest manifest = start_manifest("simulate", rc);

    limset::ClusterReport report =
        limset::run_cluster(*rc.model, rc.seq, rc.n_max, rc.seed, rc.cluster);
    // the worker count steers scheduling only; zero it in the result record
    // so reruns with any parallelism emit identical bytes
    report.config.workers = 0;

    auto sets = limset::predicted_sets(*rc.model, rc.seq, rc.criteria);
    auto containment =
        limset::containment_check(report, sets, *rc.model, rc.containment_tol);

    manifest.files.push_back(
        write_file(dir, "report.json", limset::cluster_report_to_json(report)));
    manifest.files.push_back(write_file(
        dir, "points.csv", limset::cluster_points_to_csv(report.points)));
    manifest.files.push_back(
        write_file(dir, "net.csv", limset::net_to_csv(report.net)));
    if (!report.snapshots.empty())
      manifest.files.push_back(write_file(
          dir, "snapshots.csv", limset::snapshots_to_csv(report.snapshots)));
    manifest.files.push_back(write_file(dir, "predicted.json",
                                        limset::predicted_sets_to_json(sets)));
    std::string containment_json = limset::containment_to_json(containment);
    manifest.files.push_back(
        write_file(dir, "containment.json", containment_json));
    if (rc.model->dim() == 2)
      manifest.files.push_back(
          write_file(dir, "scatter.svg", scatter_svg(report, sets, *rc.model)));
    if (!report.snapshots.empty())
      manifest.files.push_back(
          write_file(dir, "paths.svg", paths_svg(report.snapshots)));

    manifest.summary = {{"points", report.points.size()},
                        {"net_size", report.net.size()},
                        {"snapshots", report.snapshots.size()},
                        {"coverage", containment.coverage},
                        {"upper_violations", containment.upper_violations},
                        {"sqrt_violations", containment.sqrt_violations}};
    finish_manifest(manifest, dir);

    bool clean = containment.upper_violations == 0 &&
                 containment.sqrt_violations == 0;
    if (flags.json_out) {
      out << containment_json;
    } else if (!flags.quiet) {
      out << "n_max " << report.n_max << ", " << report.points.size()
          << " retained visits, net of " << report.net.size() << " at delta "
          << rc.cluster.delta << "\n";
      out << "containment: max upper dist " << containment.max_upper_dist
          << " (tol " << containment.tol << "), coverage "
          << containment.coverage << ", violations "
          << containment.upper_violations + containment.sqrt_violations
          << "\n";
      out << "results: " << dir << "\n";
    }
    return clean ? kExitOk : kExitViolations;
  } catch (const limset::error& e) {
    return usage_error(err, e);
  }
}

int cmd_example8(const Example8Flags& flags, std::ostream& out,
                 std::ostream& err) {
  try {
    // load the document first so the mode/k_max/kappa flags can override
    // the model section before it is parsed
    std::ifstream in(flags.base.config_path);
    if (!in)
      throw limset::config_error("config: cannot open '" +
                                 flags.base.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
      doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
      throw limset::config_error(std::string("config: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("model"))
      throw limset::config_error(
          "config: the ladder command needs a model section");
    json& model = doc["model"];
    if (flags.mode) {
      if (*flags.mode != "exact" && *flags.mode != "scaled")
        throw limset::config_error("--mode must be 'exact' or 'scaled'");
      model["kind"] = "example8_" + *flags.mode;
    }
    if (flags.k_max) model["k_max"] = *flags.k_max;
    if (flags.kappa) model["kappa"] = *flags.kappa;
    // the ladder's natural normalizer family, unless the config names one
    if (!doc.contains("normalizer"))
      doc["normalizer"] = {{"family", "sqrt_2n_loglog_pow"}, {"p", 1.0}};

    RunConfig rc = resolve_config(doc.dump(), flags.base.ov, true);
    auto* ladder = dynamic_cast<limset::Example8Model*>(rc.model.get());
    if (ladder == nullptr)
      throw limset::config_error(
          "config: model.kind must be example8_exact or example8_scaled");

    std::string dir = run_dir(flags.base, "example8", rc);
    RunManifest manifest = start_manifest("example8", rc);

    auto identities = ladder->verify_identities();
    long long failed_identities = 0;
    for (const auto& c : identities)
      if (!c.pass) ++failed_identities;

    auto mass = ladder->q_mass_bound(4096);

    // level envelope H(t) <= log log t on a geometric probe grid spanning
    // every anchor of the ladder
    const int probes = 1000;
    const double x_lo = std::log(4.0), x_hi = std::log(1e11);
    long long envelope_violations = 0;
    double worst_excess = 0.0;
    for (int i = 0; i < probes; ++i) {
      double x = x_lo + (x_hi - x_lo) * i / (probes - 1);
      double ln_t = std::exp(x);
      double h = std::exp(ladder->ln_H(ln_t));
      double excess = h - std::log(ln_t);
      worst_excess = std::max(worst_excess, excess);
      if (excess > 1e-9) ++envelope_violations;
    }

    json report;
    report["identities"] = json::array();
    for (const auto& c : identities)
      report["identities"].push_back(
          {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    report["q_mass"] = {{"enumerated", mass.enumerated},
                       {"tail_bound", mass.tail_bound},
                       {"total", mass.total},
                       {"below_half", mass.below_half}};
    report["envelope"] = {{"probes", probes},
                          {"violations", envelope_violations},
                          {"worst_excess", worst_excess}};
    std::string report_text = report.dump(2) + "\n";
    manifest.files.push_back(write_file(dir, "example8.json", report_text));

    bool clean =
        failed_identities == 0 && mass.below_half && envelope_violations == 0;

    if (ladder->mode() == limset::Example8Model::Mode::scaled) {
      limset::ClusterReport sim =
          limset::run_cluster(*rc.model, rc.seq, rc.n_max, rc.seed, rc.cluster);
      sim.config.workers = 0;
      auto sets = limset::predicted_sets(*rc.model, rc.seq, rc.criteria);
      auto containment =
          limset::containment_check(sim, sets, *rc.model, rc.containment_tol);
      manifest.files.push_back(
          write_file(dir, "report.json", limset::cluster_report_to_json(sim)));
      manifest.files.push_back(
          write_file(dir, "net.csv", limset::net_to_csv(sim.net)));
      manifest.files.push_back(write_file(
          dir, "predicted.json", limset::predicted_sets_to_json(sets)));
      manifest.files.push_back(write_file(
          dir, "containment.json", limset::containment_to_json(containment)));
      if (rc.model->dim() == 2)
        manifest.files.push_back(write_file(
            dir, "scatter.svg", scatter_svg(sim, sets, *rc.model)));
      manifest.summary["simulation"] =
          json{{"net_size", sim.net.size()},
               {"coverage", containment.coverage},
               {"upper_violations", containment.upper_violations},
               {"sqrt_violations", containment.sqrt_violations}};
      clean = clean && containment.upper_violations == 0 &&
              containment.sqrt_violations == 0;
    }

    manifest.summary["identities_failed"] = failed_identities;
    manifest.summary["identities_total"] = identities.size();
    manifest.summary["q_mass_total"] = mass.total;
    manifest.summary["envelope_violations"] = envelope_violations;
    finish_manifest(manifest, dir);

    if (flags.base.json_out) {
      out << report_text;
    } else if (!flags.base.quiet) {
      out << "identities: " << identities.size() - failed_identities << "/"
          << identities.size() << " pass\n";
      out << "q mass total " << mass.total
          << (mass.below_half ? " < 1/2\n" : " (NOT below 1/2)\n");
      out << "level envelope: " << envelope_violations << " violations in "
          << probes << " probes\n";
      out << "results: " << dir << "\n";
    }
    return clean ? kExitOk : kExitViolations;
  } catch (const limset::error& e) {
    return usage_error(err, e);
  }
}

int cmd_tautstring(const TautStringFlags& flags, std::ostream& out,
                   std::ostream& err) {
  try {
    if (!(flags.epsilon > 0.0))
      throw limset::parameter_error("epsilon must be positive");
    std::ifstream in(flags.input_csv);
    if (!in)
      throw limset::parameter_error("cannot open '" + flags.input_csv + "'");
    limset::GridFn g = limset::grid_fn_from_csv(in);
    if (g.dim() != 1)
      throw limset::parameter_error(
          "the tube minimizer works on scalar functions; got dimension " +
          std::to_string(g.dim()));

    double energy = limset::dirichlet_energy(g);
    limset::TubeSolution sol = limset::taut_string(g, flags.epsilon);
    double tube_energy = sol.energy;

    std::string out_path = flags.out_path.empty()
                               ? flags.input_csv + ".min.csv"
                               : flags.out_path;
    std::ofstream of(out_path, std::ios::binary);
    if (!of) throw limset::parameter_error("cannot write '" + out_path + "'");
    limset::grid_fn_to_csv(sol.minimizer, of);

    if (flags.json_out) {
      json j = {{"energy", energy},
                {"tube_energy", tube_energy},
                {"epsilon", flags.epsilon},
                {"minimizer", out_path}};
      out << j.dump(2) << "\n";
    } else if (!flags.quiet) {
      out << "I(g) = " << energy << "\n";
      out << "I(g_eps) = " << tube_energy << "\n";
      out << "minimizer: " << out_path << "\n";
    }
    return kExitOk;
  } catch (const limset::error& e) {
    return usage_error(err, e);
  }
}

int cmd_verify(const VerifyFlags& flags, std::ostream& out, std::ostream& err) {
  try {
    auto results = run_verify_suite(flags.filter, flags.quiet ? nullptr : &out);
    if (results.empty()) {
      err << "error: no check matches filter '" << flags.filter << "'\n";
      return kExitUsage;
    }
    bool all_pass = true;
    for (const auto& r : results) all_pass = all_pass && r.pass;
    if (flags.json_out) {
      json j = json::array();
      for (const auto& r : results)
        j.push_back({{"name", r.name},
                     {"pass", r.pass},
                     {"detail", r.detail},
                     {"seconds", r.seconds}});
      out << j.dump(2) << "\n";
    }
    return all_pass ? kExitOk : kExitViolations;
  } catch (const limset::error& e) {
    return usage_error(err, e);
  }
}

}  // namespace limset_cli
