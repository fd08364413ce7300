#pragma once
// manifest.json: everything needed to reproduce a run, plus digests of what it wrote.

#include "job.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace impact_lattice::cli {

struct OutputRecord {
    std::string kind;
    std::string path;  ///< relative to the output directory
    std::string sha256;
};

struct RunManifest {
    Job job;
    std::vector<OutputRecord> outputs;
    std::string tool_version = kToolVersion;
    std::string created_at;  ///< UTC, ISO 8601
};

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

RunManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace impact_lattice::cli
