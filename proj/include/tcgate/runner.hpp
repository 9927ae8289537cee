#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcgate/config.hpp"

namespace tcg {

struct RunOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    bool seedless = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& subcommands();

// Loads and validates the config, runs one subcommand, writes CSVs plus manifest.json.
// Returns the process exit status; errors are reported through spdlog.
int run(const std::string& subcommand, const RunOptions& options);

}  // namespace tcg
