#pragma once

#include "weyldyn/mvalue.hpp"
#include "weyldyn/potential.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weyldyn {

/// Scenario file: "[section]" headers, "key = value" lines, '#' comments.
/// Keys before the first header land in section "".
class Config {
public:
    static Config parse(std::string_view text);
    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;
    std::optional<std::string> get(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
    std::vector<complex> get_complexes(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    /// FNV-1a over the canonical "section.key=value" lines in sorted order.
    std::uint64_t hash() const;
    std::string hash_hex() const;

    /// Directory of the file this was loaded from; relative paths resolve against it.
    const std::string& base_dir() const { return base_dir_; }

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
    std::string base_dir_;
};

double parse_double(std::string_view text);
/// "1+2i", "-0.5i", "i", "3", "2e-1-1e-3i".
complex parse_complex(std::string_view text);

/// Builds the potential named in [potential]: kind, params (comma list) or file for sampled.
Potential potential_from_config(const Config& config);

} // namespace weyldyn
