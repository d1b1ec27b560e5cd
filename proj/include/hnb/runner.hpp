#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "hnb/config.hpp"

namespace hnb {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int parse_error = 2;
inline constexpr int singularity = 3;
inline constexpr int infeasible = 4;
}  // namespace exit_code

// Environment variable that overrides the output directory from the config and --out.
inline constexpr const char* out_dir_env = "HNB_OUT_DIR";

struct RunOptions {
    std::string config_path;
    std::optional<Mode> mode;
    std::optional<std::string> out_dir;
    unsigned jobs = 1;
    // Leaves wall-clock timings out of the reports so identical configs give identical bytes.
    bool deterministic = false;
    // Integrator relative tolerance for simulate, residual tolerance for the RE modes.
    std::optional<double> tol;
};

// Loads the config, runs the selected mode, writes artifacts and returns an exit code.
// Diagnostics go to `log`; nothing is thrown.
int run(const RunOptions& opts, std::ostream& log);

// Same, on an already parsed config.
int run(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);

}  // namespace hnb
