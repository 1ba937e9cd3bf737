#ifndef BLOCKADE_LAB_COMMON_HPP
#define BLOCKADE_LAB_COMMON_HPP

#include <cstdint>
#include <string>

#include "blockade/config.hpp"

namespace blockade_lab {

// Stable exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;       // config/data parse or I/O error
inline constexpr int kExitIntegration = 3;  // propagation failure
inline constexpr int kExitNoConvergence = 4; // optimizer below target with --strict
inline constexpr int kExitUninvertible = 5;  // singular tomography point set

struct CliOptions {
    std::string scenario_path;
    std::int64_t seed = -1; // -1 = use the scenario's seed
    int jobs = 1;
    std::string out_dir; // --out; empty = BLOCKADE_LAB_OUT or ./out
    bool strict = false;
};

/// Root directory that holds one subdirectory per scenario run:
/// --out, else $BLOCKADE_LAB_OUT, else ./out.
std::string output_root(const CliOptions& opts);

/// Creates (recursively) and returns output_root()/<scenario name>.
std::string make_output_dir(const CliOptions& opts, const std::string& name);

/// Directory part of a path ("." if none).
std::string dir_of(const std::string& path);

/// `path` taken verbatim if absolute, else joined onto `base`.
std::string resolve(const std::string& base, const std::string& path);

/// Scenario seed with the --seed override applied.
std::uint64_t effective_seed(const blockade::Config& scenario, const CliOptions& opts);

constexpr double kTwoPi = 6.283185307179586476925286766559;

int cmd_simulate(const blockade::Config& scenario, const CliOptions& opts);
int cmd_grape(const blockade::Config& scenario, const CliOptions& opts);
int cmd_tomo(const blockade::Config& scenario, const CliOptions& opts);
int cmd_fit(const blockade::Config& scenario, const CliOptions& opts);

} // namespace blockade_lab

#endif
