#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ragcritic {

/// Flat key=value configuration with layered resolution:
/// built-in defaults < config file < CRITIC_* environment < explicit sets.
/// The resolved state canonicalizes to sorted key=value lines, which is what
/// run manifests digest.
class Config {
public:
    /// All known keys with their default values.
    static Config defaults();

    /// Parse a key=value file. '#' starts a comment; blank lines ignored.
    void load_file(const std::filesystem::path& path);

    /// Apply CRITIC_<UPPER_KEY> overrides for every key currently known.
    void apply_env();

    void set(std::string_view key, std::string_view value);
    bool has(std::string_view key) const;

    std::string get_string(std::string_view key) const;
    double get_double(std::string_view key) const;
    long get_long(std::string_view key) const;
    bool get_bool(std::string_view key) const;
    /// Comma-separated list; items trimmed, empties dropped.
    std::vector<std::string> get_list(std::string_view key) const;

    /// Sorted "key=value\n" lines.
    std::string canonical() const;
    /// sha256 of canonical().
    std::string digest() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace ragcritic
