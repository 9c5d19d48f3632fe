#ifndef LIMSET_CLI_MANIFEST_HPP
#define LIMSET_CLI_MANIFEST_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace limset_cli {

// Run record written next to the result files. Timestamps live here and
// only here: every other emitted file is a pure function of the resolved
// config, so re-running a manifest reproduces them byte for byte.
struct RunManifest {
  std::string command;
  std::string version;
  std::string config_hash;     // hex of the run-defining config hash
  nlohmann::json config;       // fully resolved, defaults included
  std::string started_at;      // ISO 8601 UTC
  std::string finished_at;
  std::vector<std::string> files;  // result files, relative to the run dir
  nlohmann::json summary;          // per-command verdict/violation digest

  std::string to_json() const;
};

std::string utc_now_iso8601();

// Creates the directory (and parents) if needed and writes text to
// dir/name. Returns the relative name for the manifest file index.
std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& text);

}  // namespace limset_cli

#endif
