#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace ergodize::cli {

using Json = nlohmann::ordered_json;

std::string tool_version();

// Hex FNV-1a 64 of command, tool version and the compact config dump.
std::string make_run_id(const std::string& command, const Json& config);

std::string utc_timestamp();

struct RunManifest {
  std::string command;
  Json config;
  std::string run_id;
  std::string version;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;  // file names relative to the output dir
  Json tolerances = Json::object();

  static RunManifest begin(const std::string& command, Json config);
  Json to_json() const;
  static RunManifest from_json(const Json& j);
  // Sets finished_at and writes manifest.json into dir.
  void finish(const std::filesystem::path& dir);
};

}  // namespace ergodize::cli
