#include "ergodize/cli/manifest.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "ergodize/errors.hpp"

#ifndef ERGODIZE_VERSION
#define ERGODIZE_VERSION "0.0.0"
#endif

namespace ergodize::cli {

std::string tool_version() { return ERGODIZE_VERSION; }

std::string make_run_id(const std::string& command, const Json& config) {
  const std::string text = command + '\n' + tool_version() + '\n' + config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest RunManifest::begin(const std::string& command, Json config) {
  RunManifest m;
  m.command = command;
  m.run_id = make_run_id(command, config);
  m.config = std::move(config);
  m.version = tool_version();
  m.started_at = utc_timestamp();
  return m;
}

Json RunManifest::to_json() const {
  Json j;
  j["run_id"] = run_id;
  j["command"] = command;
  j["version"] = version;
  j["config"] = config;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["outputs"] = outputs;
  j["tolerances"] = tolerances;
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.run_id = j.value("run_id", std::string{});
    m.version = j.value("version", std::string{});
    m.started_at = j.value("started_at", std::string{});
    m.finished_at = j.value("finished_at", std::string{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    if (j.contains("tolerances")) m.tolerances = j.at("tolerances");
  } catch (const Json::exception& e) {
    throw DomainError(std::string("manifest: ") + e.what());
  }
  return m;
}

void RunManifest::finish(const std::filesystem::path& dir) {
  finished_at = utc_timestamp();
  std::ofstream os(dir / "manifest.json");
  if (!os) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  os << to_json().dump(2) << '\n';
}

}  // namespace ergodize::cli
