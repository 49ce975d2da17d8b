#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "ridgeline/errors.hpp"
#include "ridgeline/ingest.hpp"
#include "ridgeline/scms.hpp"

namespace ridgeline {

inline constexpr const char* kToolVersion = "0.1.0";

// Fully resolved description of an estimate run. Re-running from a saved
// manifest reproduces the output files byte for byte (thread count may vary;
// results do not depend on it).
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command = "estimate";
  std::string timestamp;  // informational only

  std::string input_csv;
  CsvSchema schema;
  bool part1_filter = true;
  std::string mapping_file;  // empty = built-in mapping
  std::size_t sample = 0;    // 0 = no subsampling
  std::uint64_t sample_seed = 1;

  ScmsConfig config;

  std::string out_csv;
  std::string out_geojson;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["timestamp"] = m.timestamp;
  j["input_csv"] = m.input_csv;
  j["columns"] = {{"type", m.schema.type_column},
                  {"lat", m.schema.lat_column},
                  {"lon", m.schema.lon_column},
                  {"date", m.schema.date_column}};
  if (m.schema.year) j["year"] = *m.schema.year;
  j["part1_filter"] = m.part1_filter;
  j["mapping_file"] = m.mapping_file;
  j["sample"] = m.sample;
  j["sample_seed"] = m.sample_seed;
  j["neighbors"] = m.config.neighbors;
  if (m.config.bandwidth) j["bandwidth_degrees"] = m.config.bandwidth->degrees();
  j["convergence_degrees"] = m.config.convergence_degrees;
  if (m.config.percentage) j["percentage"] = *m.config.percentage;
  if (m.config.mesh_size) j["mesh_size"] = *m.config.mesh_size;
  j["threshold_quantile"] = m.config.threshold_quantile;
  j["max_iterations"] = m.config.max_iterations;
  j["seed"] = m.config.seed;
  j["threads"] = m.config.threads;
  j["out_csv"] = m.out_csv;
  j["out_geojson"] = m.out_geojson;
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.tool_version = j.value("tool_version", std::string(kToolVersion));
  m.command = j.value("command", std::string("estimate"));
  m.timestamp = j.value("timestamp", std::string());
  m.input_csv = j.at("input_csv").get<std::string>();
  if (j.contains("columns")) {
    const auto& c = j["columns"];
    m.schema.type_column = c.value("type", m.schema.type_column);
    m.schema.lat_column = c.value("lat", m.schema.lat_column);
    m.schema.lon_column = c.value("lon", m.schema.lon_column);
    m.schema.date_column = c.value("date", m.schema.date_column);
  }
  if (j.contains("year")) m.schema.year = j["year"].get<int>();
  m.part1_filter = j.value("part1_filter", true);
  m.mapping_file = j.value("mapping_file", std::string());
  m.sample = j.value("sample", std::size_t{0});
  m.sample_seed = j.value("sample_seed", std::uint64_t{1});
  m.config.neighbors = j.value("neighbors", 10);
  if (j.contains("bandwidth_degrees"))
    m.config.bandwidth = Bandwidth::from_degrees(j["bandwidth_degrees"].get<double>());
  m.config.convergence_degrees = j.value("convergence_degrees", 0.01);
  if (j.contains("percentage")) m.config.percentage = j["percentage"].get<double>();
  if (j.contains("mesh_size")) m.config.mesh_size = j["mesh_size"].get<std::size_t>();
  m.config.threshold_quantile = j.value("threshold_quantile", 0.5);
  m.config.max_iterations = j.value("max_iterations", 500);
  m.config.seed = j.value("seed", std::uint64_t{1});
  m.config.threads = j.value("threads", 1);
  m.out_csv = j.value("out_csv", std::string());
  m.out_geojson = j.value("out_geojson", std::string());
  return m;
}

inline void save_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFileError("cannot write manifest: " + path);
  out << to_json(m).dump(2) << '\n';
}

inline RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("manifest parse error: ") + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace ridgeline
