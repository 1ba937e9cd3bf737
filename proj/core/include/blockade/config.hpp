#ifndef BLOCKADE_CONFIG_HPP
#define BLOCKADE_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockade {

/// Line-oriented "key = value" config text. '#' starts a comment, blank
/// lines are ignored, values may be scalars or comma-separated lists.
/// Keys carry explicit unit suffixes (_hz, _us, _rad) by convention.
class Config {
public:
    Config() = default;
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::string& raw(const std::string& key) const;

    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

private:
    std::map<std::string, std::string> values_;
};

/// Thrown on malformed config text; carries the offending line number.
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(const std::string& what, int line_) : std::runtime_error(what), line(line_) {}
};

} // namespace blockade

#endif
