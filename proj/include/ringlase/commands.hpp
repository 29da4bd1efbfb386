#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace ringlase {

struct RunOptions {
    std::string command;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool timestamp = true;
    std::optional<double> power_mw;     // jsd
    std::optional<std::string> input;  // schmidt
};

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumeric = 3, kExitAnalysis = 4 };

/// Runs one command end to end. Diagnostics go to `err`, a short summary to `out`.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace ringlase
