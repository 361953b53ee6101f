#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ragcritic {

std::string sha256_hex(std::string_view bytes);
std::string sha256_hex_file(const std::filesystem::path& path);

/// ISO-8601 UTC timestamp for run manifests.
std::string utc_timestamp_now();

/// Ties one command's outputs to its inputs and resolved configuration.
/// Written next to every output file as <output>.manifest.json.
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (path, sha256)
    long seed = 0;
    std::string started_at;
    std::string finished_at;
    long records_read = 0;
    long records_processed = 0;
    long records_failed = 0;
    std::string tool_version;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace ragcritic
