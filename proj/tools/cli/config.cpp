#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "limset/errors.hpp"

namespace limset_cli {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* section,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw limset::config_error(std::string("config: unknown key '") +
                                 it.key() + "' in section '" + section + "'");
  }
}

// Returns section `name` as an object, inserting {} when absent.
json& section(json& doc, const char* name) {
  if (!doc.contains(name)) doc[name] = json::object();
  json& s = doc[name];
  if (!s.is_object())
    throw limset::config_error(std::string("config: section '") + name +
                               "' must be an object");
  return s;
}

template <typename T>
T take(json& obj, const char* section_name, const char* key, T fallback) {
  if (!obj.contains(key)) {
    obj[key] = fallback;
    return fallback;
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw limset::config_error(std::string("config: bad value for '") +
                               section_name + "." + key + "'");
  }
}

limset::GridFn function_query(const json& entry, std::size_t index) {
  std::string where = "queries.functions[" + std::to_string(index) + "]";
  if (!entry.is_object())
    throw limset::config_error("config: " + where + " must be an object");
  if (entry.contains("line")) {
    auto slopes = entry.at("line").get<std::vector<double>>();
    if (slopes.empty())
      throw limset::config_error("config: " + where + ".line is empty");
    int n_grid = entry.value("n_grid", 64);
    limset::GridFn f(static_cast<int>(slopes.size()), n_grid);
    for (int i = 0; i <= n_grid; ++i)
      for (std::size_t c = 0; c < slopes.size(); ++c)
        f.at(i, static_cast<int>(c)) = slopes[c] * f.t(i);
    return f;
  }
  if (entry.contains("values")) {
    limset::GridFn f(entry.at("dim").get<int>(), entry.at("n_grid").get<int>(),
                     entry.at("values").get<std::vector<double>>());
    f.validate();
    return f;
  }
  throw limset::config_error("config: " + where +
                             " needs either 'line' or 'values'");
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::uint64_t RunConfig::config_hash() const {
  json view = resolved;
  if (view.contains("simulation")) view["simulation"].erase("workers");
  return fnv1a64(view.dump());
}

std::string RunConfig::hash_hex() const { return to_hex(config_hash()); }

std::optional<int> env_thread_cap() {
  const char* v = std::getenv("LIMSET_THREADS");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1)
    throw limset::config_error(
        "LIMSET_THREADS must be a positive integer, got '" + std::string(v) +
        "'");
  return static_cast<int>(n);
}

RunConfig resolve_config(const std::string& json_text, const Overrides& ov,
                         bool require_model) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw limset::config_error(std::string("config: ") + e.what());
  }
  if (!doc.is_object())
    throw limset::config_error("config: top level must be a JSON object");
  check_keys(doc, "<top>",
             {"model", "normalizer", "queries", "simulation", "classifier"});

  RunConfig rc;

  if (doc.contains("model")) {
    rc.model = limset::model_from_json(doc.at("model").dump());
  } else if (require_model) {
    throw limset::config_error("config: missing required section 'model'");
  }

  json& norm = section(doc, "normalizer");
  if (!norm.contains("family")) norm["family"] = "sqrt_2n_loglog";
  rc.seq = limset::normalizer_from_json(norm.dump());

  json& cls = section(doc, "classifier");
  check_keys(cls, "classifier",
             {"rho", "blocks", "margin", "ln_n_cap", "alpha_hi", "alpha_step",
              "refine_rounds"});
  rc.criteria.series.rho = take(cls, "classifier", "rho", rc.criteria.series.rho);
  rc.criteria.series.blocks =
      take(cls, "classifier", "blocks", rc.criteria.series.blocks);
  rc.criteria.series.margin =
      take(cls, "classifier", "margin", rc.criteria.series.margin);
  rc.criteria.series.ln_n_cap =
      take(cls, "classifier", "ln_n_cap", rc.criteria.series.ln_n_cap);
  rc.criteria.alpha_hi =
      take(cls, "classifier", "alpha_hi", rc.criteria.alpha_hi);
  rc.criteria.alpha_step =
      take(cls, "classifier", "alpha_step", rc.criteria.alpha_step);
  rc.criteria.refine_rounds =
      take(cls, "classifier", "refine_rounds", rc.criteria.refine_rounds);

  json& sim = section(doc, "simulation");
  check_keys(sim, "simulation",
             {"n_max", "seed", "theta", "delta", "burn_in_exponent", "streams",
              "workers", "grid_size", "snapshot_count", "containment_tol"});
  if (ov.n_max) sim["n_max"] = *ov.n_max;
  if (ov.seed) sim["seed"] = *ov.seed;
  if (ov.streams) sim["streams"] = *ov.streams;
  if (ov.workers) sim["workers"] = *ov.workers;
  rc.n_max = take(sim, "simulation", "n_max", rc.n_max);
  rc.seed = take(sim, "simulation", "seed", rc.seed);
  rc.cluster.theta = take(sim, "simulation", "theta", rc.cluster.theta);
  rc.cluster.delta = take(sim, "simulation", "delta", rc.cluster.delta);
  rc.cluster.burn_in_exponent = take(sim, "simulation", "burn_in_exponent",
                                     rc.cluster.burn_in_exponent);
  rc.cluster.streams = take(sim, "simulation", "streams", rc.cluster.streams);
  rc.cluster.workers = take(sim, "simulation", "workers", rc.cluster.workers);
  rc.cluster.grid_size =
      take(sim, "simulation", "grid_size", rc.cluster.grid_size);
  rc.cluster.snapshot_count =
      take(sim, "simulation", "snapshot_count", rc.cluster.snapshot_count);
  rc.containment_tol =
      take(sim, "simulation", "containment_tol", rc.containment_tol);
  if (auto cap = env_thread_cap())
    rc.cluster.workers = std::min(rc.cluster.workers, *cap);

  json& q = section(doc, "queries");
  check_keys(q, "queries", {"points", "functions", "epsilons"});
  if (!q.contains("points")) q["points"] = json::array();
  if (!q.contains("functions")) q["functions"] = json::array();
  rc.criteria.epsilons = take(q, "queries", "epsilons", rc.criteria.epsilons);
  try {
    rc.point_queries =
        q.at("points").get<std::vector<std::vector<double>>>();
  } catch (const json::exception&) {
    throw limset::config_error(
        "config: queries.points must be an array of coordinate arrays");
  }
  const json& fns = q.at("functions");
  if (!fns.is_array())
    throw limset::config_error("config: queries.functions must be an array");
  for (std::size_t i = 0; i < fns.size(); ++i)
    rc.function_queries.push_back(function_query(fns[i], i));

  rc.resolved = std::move(doc);
  return rc;
}

RunConfig load_config(const std::string& path, const Overrides& ov,
                      bool require_model) {
  std::ifstream in(path);
  if (!in)
    throw limset::config_error("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return resolve_config(buf.str(), ov, require_model);
}

}  // namespace limset_cli
