#ifndef LIMSET_CLI_CONFIG_HPP
#define LIMSET_CLI_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "limset/criteria.hpp"
#include "limset/grid_fn.hpp"
#include "limset/moment_model.hpp"
#include "limset/normalizer.hpp"
#include "limset/simulate.hpp"

namespace limset_cli {

// Flag values shared by the run commands; unset optionals fall back to the
// config document, which falls back to the built-in defaults. The final
// value of every knob is echoed into the resolved config, so a manifest
// never hides a default.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<long long> n_max;
  std::optional<int> streams;
  std::optional<int> workers;
};

// A config document resolved against the defaults: the JSON view plus the
// constructed engine objects.
struct RunConfig {
  nlohmann::json resolved;  // full document, every default filled in
  std::shared_ptr<limset::MomentModel> model;  // null when no model section
  limset::NormalizerSeq seq = limset::NormalizerSeq::sqrt_2n_loglog();
  limset::CriteriaConfig criteria;
  limset::ClusterConfig cluster;
  long long n_max = 100000;
  std::uint64_t seed = 1;
  double containment_tol = 0.25;
  std::vector<std::vector<double>> point_queries;
  std::vector<limset::GridFn> function_queries;

  // Hash of the run-defining part of the resolved config (worker count is
  // excluded: it never changes results, only wall time).
  std::uint64_t config_hash() const;
  std::string hash_hex() const;
};

// Parses, applies overrides, fills defaults, and constructs the engine
// objects. Unknown sections or keys are config errors so typos cannot
// silently fall back to defaults. `require_model` makes a missing model
// section an error (criteria and simulate need one).
RunConfig resolve_config(const std::string& json_text, const Overrides& ov,
                         bool require_model);
RunConfig load_config(const std::string& path, const Overrides& ov,
                      bool require_model);

std::uint64_t fnv1a64(const std::string& text);
std::string to_hex(std::uint64_t v);

// Worker cap from the LIMSET_THREADS environment variable (>= 1), if set.
std::optional<int> env_thread_cap();

}  // namespace limset_cli

#endif
