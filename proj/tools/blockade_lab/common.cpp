#include "common.hpp"

#include <cstdlib>
#include <filesystem>

namespace blockade_lab {

std::string output_root(const CliOptions& opts) {
    if (!opts.out_dir.empty()) return opts.out_dir;
    if (const char* env = std::getenv("BLOCKADE_LAB_OUT"); env && *env) return env;
    return "out";
}

std::string make_output_dir(const CliOptions& opts, const std::string& name) {
    std::filesystem::path p = std::filesystem::path(output_root(opts)) / name;
    std::filesystem::create_directories(p);
    return p.string();
}

std::string dir_of(const std::string& path) {
    auto p = std::filesystem::path(path).parent_path();
    return p.empty() ? std::string(".") : p.string();
}

std::string resolve(const std::string& base, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base) / p).string();
}

std::uint64_t effective_seed(const blockade::Config& scenario, const CliOptions& opts) {
    if (opts.seed >= 0) return static_cast<std::uint64_t>(opts.seed);
    return static_cast<std::uint64_t>(scenario.get_int("seed", 1));
}

} // namespace blockade_lab
