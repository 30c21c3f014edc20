#include "hermspec/config.hpp"

#include "hermspec/text.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hermspec {

namespace {

std::string locate(const std::string& what, int line, int column) {
    if (line == 0) return fmt::format("--set (column {}): {}", column, what);
    return fmt::format("line {}, column {}: {}", line, column, what);
}

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line, int column)
    : InputError(locate(what, line, column)), line_(line), column_(column) {}

const std::set<std::string>& Config::known_keys() {
    static const std::set<std::string> keys = {
        "output_dir", "dimension", "degree_min", "degree_max", "set", "region", "window",
        "gamma",      "beta",      "rho",        "covering",   "R",   "eps",    "alpha",
        "profile",    "radius",    "tolerance",  "nodes",      "m_max", "delta", "T",
        "K",          "C1",        "C2",         "C3",         "d0",  "d1",     "zeta",
        "seed",       "samples",   "M",          "steps",      "phases", "density",
        "besicovitch_d2_degrees",
    };
    return keys;
}

void Config::add(Entry entry, bool replace, int key_column) {
    if (!known_keys().contains(entry.key))
        throw ConfigError("unknown key '" + entry.key + "'", entry.line, key_column);
    if (entry.key != "region") {
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->key != entry.key) continue;
            if (!replace) throw ConfigError("duplicate key '" + entry.key + "'", entry.line, key_column);
            entries_.erase(it);
            break;
        }
    }
    entries_.push_back(std::move(entry));
}

Config Config::parse(std::string_view text) {
    Config config;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) {
            if (end == text.size()) break;
            continue;
        }
        const auto eq = line.find('=');
        const auto first = line.find_first_not_of(" \t");
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value'", line_no, static_cast<int>(first) + 1);
        const std::string_view key = trim(line.substr(0, eq));
        if (!valid_key(key)) throw ConfigError("invalid key '" + std::string(key) + "'", line_no, static_cast<int>(first) + 1);
        const std::string_view raw_value = line.substr(eq + 1);
        const std::string_view value = trim(raw_value);
        const auto vstart = raw_value.find_first_not_of(" \t");
        const int value_column = static_cast<int>(eq) + 2 + static_cast<int>(vstart == std::string_view::npos ? 0 : vstart);
        if (value.empty()) throw ConfigError("missing value for '" + std::string(key) + "'", line_no, value_column);
        config.add(Entry{std::string(key), std::string(value), line_no, value_column}, false, static_cast<int>(first) + 1);
        if (end == text.size()) break;
    }
    return config;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", 1, 1);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void Config::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value", 0, 1);
    const std::string_view key = trim(assignment.substr(0, eq));
    const std::string_view value = trim(assignment.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("invalid key '" + std::string(key) + "'", 0, 1);
    if (value.empty()) throw ConfigError("missing value for '" + std::string(key) + "'", 0, static_cast<int>(eq) + 2);
    add(Entry{std::string(key), std::string(value), 0, static_cast<int>(eq) + 2}, true, 1);
}

const Config::Entry* Config::find(std::string_view key) const {
    for (const Entry& e : entries_)
        if (e.key == key) return &e;
    return nullptr;
}

bool Config::has(std::string_view key) const { return find(key) != nullptr; }

std::optional<std::string> Config::get(std::string_view key) const {
    if (const Entry* e = find(key)) return e->value;
    return std::nullopt;
}

std::vector<std::string> Config::get_all(std::string_view key) const {
    std::vector<std::string> out;
    for (const Entry& e : entries_)
        if (e.key == key) out.push_back(e.value);
    return out;
}

std::vector<Config::Located> Config::get_all_located(std::string_view key) const {
    std::vector<Located> out;
    for (const Entry& e : entries_)
        if (e.key == key) out.push_back({e.value, e.line, e.value_column});
    return out;
}

std::pair<int, int> Config::location(std::string_view key) const {
    if (const Entry* e = find(key)) return {e->line, e->value_column};
    return {1, 1};
}

std::string Config::get_string(std::string_view key, std::string_view fallback) const {
    const Entry* e = find(key);
    return e ? e->value : std::string(fallback);
}

std::optional<double> Config::get_optional_double(std::string_view key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    try {
        return parse_double(e->value, e->key);
    } catch (const InputError& err) {
        throw ConfigError(err.what(), e->line, e->value_column);
    }
}

double Config::get_double(std::string_view key, double fallback) const {
    return get_optional_double(key).value_or(fallback);
}

long long Config::get_int(std::string_view key, long long fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    try {
        return parse_integer(e->value, e->key);
    } catch (const InputError& err) {
        throw ConfigError(err.what(), e->line, e->value_column);
    }
}

std::vector<int> Config::get_int_list(std::string_view key, std::vector<int> fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    std::vector<int> out;
    std::size_t start = 0;
    const std::string& v = e->value;
    while (start <= v.size()) {
        const std::size_t comma = std::min(v.find(',', start), v.size());
        const std::string_view item = trim(std::string_view(v).substr(start, comma - start));
        const int column = e->value_column + static_cast<int>(start);
        try {
            if (const auto dots = item.find(".."); dots != std::string_view::npos) {
                const auto a = parse_integer(trim(item.substr(0, dots)), e->key);
                const auto b = parse_integer(trim(item.substr(dots + 2)), e->key);
                if (b < a) throw ConfigError("empty range in '" + e->key + "'", e->line, column);
                for (auto k = a; k <= b; ++k) out.push_back(static_cast<int>(k));
            } else {
                out.push_back(static_cast<int>(parse_integer(item, e->key)));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const InputError& err) {
            throw ConfigError(err.what(), e->line, column);
        }
        if (comma == v.size()) break;
        start = comma + 1;
    }
    return out;
}

void Config::require(const std::vector<std::string>& keys) const {
    for (const std::string& k : keys)
        if (!has(k)) throw ConfigError("missing required key '" + k + "'", 0, 0);
}

double default_window(int d, int N) { return 64.0 * d * std::sqrt(N + 1.0); }

SensorSet build_sensor_set(const Config& config, int d, int N) {
    const std::string kind = config.get_string("set", "regions");
    const double window = config.get_double("window", default_window(d, N));
    if (!(window > 0.0)) {
        const auto [line, column] = config.location("window");
        throw ConfigError("window must be positive", line, column);
    }
    if (kind == "regions") {
        std::vector<Region> regions;
        for (const Config::Located& r : config.get_all_located("region")) {
            try {
                regions.push_back(parse_region(d, r.value));
            } catch (const InputError& e) {
                throw ConfigError(e.what(), r.line, r.column);
            }
        }
        try {
            return SensorSet(d, std::move(regions));
        } catch (const InputError& e) {
            const auto [line, column] = config.location("region");
            throw ConfigError(e.what(), line, column);
        }
    }
    if (kind == "example") {
        CubeDensitySpec spec{config.get_double("gamma", 0.5), config.get_double("beta", 0.5), 1.0, d};
        const double example_window = config.get_double("window", effective_support_radius(N) + 2.0);
        return example_finite_measure_set(spec, example_window).set;
    }
    std::vector<double> lo(static_cast<std::size_t>(d), -window);
    std::vector<double> hi(static_cast<std::size_t>(d), window);
    if (kind == "halfline") {
        lo[0] = 0.0;
        return SensorSet(d, {Region::box_from_bounds(lo, hi)});
    }
    if (kind == "fullspace") return SensorSet(d, {Region::box_from_bounds(lo, hi)});
    const auto [line, column] = config.location("set");
    throw ConfigError("unknown set kind '" + kind + "' (expected regions, example, halfline or fullspace)", line, column);
}

QuadratureRule build_quadrature_rule(const Config& config) {
    QuadratureRule rule;
    rule.tolerance = config.get_double("tolerance", rule.tolerance);
    rule.nodes = static_cast<int>(config.get_int("nodes", rule.nodes));
    return rule;
}

}  // namespace hermspec
