#include "weyldyn/config.hpp"

#include "weyldyn/errors.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace weyldyn {

namespace {

std::string trim(std::string_view s)
{
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(',', start);
        if (end == std::string_view::npos)
            end = s.size();
        std::string item = trim(s.substr(start, end - start));
        if (!item.empty())
            out.push_back(std::move(item));
        start = end + 1;
    }
    return out;
}

} // namespace

double parse_double(std::string_view text)
{
    const std::string s = trim(text);
    if (s == "inf" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + s + "'");
    }
    if (used != s.size())
        throw InvalidArgument("not a number: '" + s + "'");
    return value;
}

complex parse_complex(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw InvalidArgument("empty complex number");
    if (s.back() != 'i' && s.back() != 'j')
        return {parse_double(s), 0.0};
    s.pop_back();
    // split at the last sign that is not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t p = s.size(); p-- > 1;)
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split = p;
            break;
        }
    const std::string re = split == std::string::npos ? "" : s.substr(0, split);
    std::string im = split == std::string::npos ? s : s.substr(split);
    if (im.empty() || im == "+")
        im = "1";
    else if (im == "-")
        im = "-1";
    return {re.empty() ? 0.0 : parse_double(re), parse_double(im)};
}

Config Config::parse(std::string_view text)
{
    Config config;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidArgument("config line " + std::to_string(line_no) + ": unterminated section");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            config.values_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty())
            throw InvalidArgument("config line " + std::to_string(line_no) + ": empty key");
        config.values_[section][key] = trim(std::string_view(line).substr(eq + 1));
    }
    return config;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    Config config = parse(buf.str());
    config.base_dir_ = std::filesystem::path(path).parent_path().string();
    return config;
}

bool Config::has(const std::string& section, const std::string& key) const
{
    return get(section, key).has_value();
}

bool Config::has_section(const std::string& section) const
{
    return values_.count(section) != 0;
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const
{
    auto s = values_.find(section);
    if (s == values_.end())
        return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end())
        return std::nullopt;
    return k->second;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const
{
    return get(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const
{
    auto v = get(section, key);
    if (!v)
        return fallback;
    try {
        return parse_double(*v);
    } catch (const InvalidArgument& e) {
        throw InvalidArgument("[" + section + "] " + key + ": " + e.what());
    }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const
{
    auto v = get(section, key);
    if (!v)
        return fallback;
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(*v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v->size())
        throw InvalidArgument("[" + section + "] " + key + ": not an integer: '" + *v + "'");
    return value;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const
{
    auto v = get(section, key);
    if (!v)
        return fallback;
    if (*v == "true" || *v == "yes" || *v == "1" || *v == "on")
        return true;
    if (*v == "false" || *v == "no" || *v == "0" || *v == "off")
        return false;
    throw InvalidArgument("[" + section + "] " + key + ": not a boolean: '" + *v + "'");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const
{
    std::vector<double> out;
    auto v = get(section, key);
    if (!v)
        return out;
    for (const std::string& item : split_list(*v)) {
        try {
            out.push_back(parse_double(item));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("[" + section + "] " + key + ": " + e.what());
        }
    }
    return out;
}

std::vector<complex> Config::get_complexes(const std::string& section, const std::string& key) const
{
    std::vector<complex> out;
    auto v = get(section, key);
    if (!v)
        return out;
    for (const std::string& item : split_list(*v)) {
        try {
            out.push_back(parse_complex(item));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("[" + section + "] " + key + ": " + e.what());
        }
    }
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value)
{
    values_[section][key] = value;
}

std::uint64_t Config::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [section, keys] : values_)
        for (const auto& [key, value] : keys) {
            feed(section);
            feed(".");
            feed(key);
            feed("=");
            feed(value);
            feed("\n");
        }
    return h;
}

std::string Config::hash_hex() const
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

Potential potential_from_config(const Config& config)
{
    const std::string kind_name = config.get_string("potential", "kind", "zero");
    const PotentialKind kind = parse_potential_kind(kind_name);
    if (kind == PotentialKind::sampled) {
        auto file = config.get("potential", "file");
        if (!file)
            throw InvalidArgument("[potential] kind = sampled needs a file key");
        std::filesystem::path path(*file);
        if (path.is_relative() && !config.base_dir().empty())
            path = std::filesystem::path(config.base_dir()) / path;
        return read_potential_file(path.string());
    }
    return make_catalog_potential(kind, config.get_doubles("potential", "params"));
}

} // namespace weyldyn
