#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bvqlab {

enum ExitCode : int { ok = 0, runtime_failure = 1, config_error = 2, guard_violation = 3, verdict_failure = 4 };

struct RunOptions {
    std::filesystem::path config;
    std::filesystem::path out;  // empty: output.dir from the config, else the working directory
    int threads = 0;
    std::optional<std::uint64_t> seed;
    std::string tolerance_profile = "default";  // or "strict"
};

const std::vector<std::string>& subcommands();

// Validates everything (config, field, schedule guards) before computing, then
// writes report.json and the command's artifacts into the output directory.
int run(const std::string& command, const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace bvqlab
