#pragma once

#include <string>
#include <vector>

#include "tcgate/scans.hpp"

namespace tcg {

// Header row, then one row per cell: axis values, column values, optional flag.
std::string csv_text(const ScanResult& result);
void emit_csv(const ScanResult& result, const std::string& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(const std::string& text);

std::string sha256_hex(const std::string& bytes);

struct RunManifest {
    std::string subcommand;
    std::string config_hash;
    std::string tool_version;
    std::string started_utc;
    double wall_seconds = 0.0;
    int threads = 1;
    bool seedless = false;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> scan_metadata;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

void write_text(const std::string& path, const std::string& text);

inline constexpr const char* kToolVersion = "tcgate 1.0.0";

}  // namespace tcg
