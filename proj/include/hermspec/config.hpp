#pragma once

#include "hermspec/errors.hpp"
#include "hermspec/gram.hpp"
#include "hermspec/set_geometry.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hermspec {

/// Malformed or invalid configuration. Line 0 refers to a command-line override.
class ConfigError : public InputError {
public:
    ConfigError(const std::string& what, int line, int column);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Flat `key = value` configuration with `#` comments. Only `region` may repeat.
class Config {
public:
    static Config parse(std::string_view text);
    static Config load(const std::filesystem::path& path);

    /// `key=value` from the command line; replaces earlier values of the key
    /// (appends for `region`).
    void apply_override(std::string_view assignment);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    std::vector<std::string> get_all(std::string_view key) const;

    struct Located {
        std::string value;
        int line = 0;
        int column = 0;
    };
    std::vector<Located> get_all_located(std::string_view key) const;
    /// Where the value of `key` starts; (1, 1) if the key is absent.
    std::pair<int, int> location(std::string_view key) const;

    std::string get_string(std::string_view key, std::string_view fallback) const;
    double get_double(std::string_view key, double fallback) const;
    std::optional<double> get_optional_double(std::string_view key) const;
    long long get_int(std::string_view key, long long fallback) const;
    /// Comma-separated integers; `a..b` expands to an inclusive range.
    std::vector<int> get_int_list(std::string_view key, std::vector<int> fallback) const;

    /// Throws ConfigError naming the first missing key.
    void require(const std::vector<std::string>& keys) const;

    /// Every key the tool understands.
    static const std::set<std::string>& known_keys();

private:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
        int value_column = 0;
    };
    const Entry* find(std::string_view key) const;
    void add(Entry entry, bool replace, int key_column);

    std::vector<Entry> entries_;
};

/// The sensor set described by `set` (regions | example | halfline | fullspace) and its
/// parameters, for dimension d and degree N.
SensorSet build_sensor_set(const Config& config, int d, int N);

/// Default truncation radius 64d√(N+1) for unbounded sets.
double default_window(int d, int N);

QuadratureRule build_quadrature_rule(const Config& config);

}  // namespace hermspec
