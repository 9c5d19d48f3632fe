#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "limset/errors.hpp"

namespace limset_cli {

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = version;
  j["config_hash"] = config_hash;
  j["config"] = config;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["files"] = files;
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string utc_now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw limset::parameter_error("cannot create output directory '" + dir +
                                  "': " + ec.message());
  fs::path p = fs::path(dir) / name;
  std::ofstream out(p, std::ios::binary);
  if (!out) throw limset::parameter_error("cannot write '" + p.string() + "'");
  out << text;
  out.close();
  if (!out) throw limset::parameter_error("write failed for '" + p.string() + "'");
  return name;
}

}  // namespace limset_cli
