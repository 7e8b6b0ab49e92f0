#include "rbmlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rbmlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    std::size_t pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    cfg.text_ = text;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    Section* current = nullptr;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        std::string where = origin + ":" + std::to_string(lineno);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: unterminated section header at " + where);
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ConfigError("config: empty section name at " + where);
            if (cfg.find_section(name))
                throw ConfigError("config: duplicate section [" + name + "] at " + where);
            cfg.sections_.push_back(Section{name, {}});
            current = &cfg.sections_.back();
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' at " + where);
        if (!current)
            throw ConfigError("config: key outside any [section] at " + where);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key at " + where);
        for (const auto& [k, v] : current->entries)
            if (k == key)
                throw ConfigError("config: duplicate key '" + key + "' in [" + current->name +
                                  "] at " + where);
        current->entries.emplace_back(key, value);
    }
    return cfg;
}

const Config::Section* Config::find_section(const std::string& name) const {
    for (const auto& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

const std::string* Config::find_value(const std::string& section, const std::string& key) const {
    const Section* s = find_section(section);
    if (!s) return nullptr;
    for (const auto& [k, v] : s->entries)
        if (k == key) return &v;
    return nullptr;
}

bool Config::has_section(const std::string& section) const {
    return find_section(section) != nullptr;
}

std::vector<std::string> Config::section_names() const {
    std::vector<std::string> out;
    out.reserve(sections_.size());
    for (const auto& s : sections_) out.push_back(s.name);
    return out;
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find_value(section, key) != nullptr;
}

std::vector<std::pair<std::string, std::string>> Config::items(const std::string& section) const {
    const Section* s = find_section(section);
    return s ? s->entries : std::vector<std::pair<std::string, std::string>>{};
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    const std::string* v = find_value(section, key);
    if (!v) throw ConfigError("config: missing key '" + key + "' in [" + section + "]");
    return *v;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const std::string* v = find_value(section, key);
    return v ? *v : fallback;
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
    const std::string* v = find_value(section, key);
    return v ? parse_long_value(*v, section + "." + key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const std::string* v = find_value(section, key);
    return v ? parse_double_value(*v, section + "." + key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const std::string* v = find_value(section, key);
    return v ? parse_bool_value(*v, section + "." + key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    const std::string* v = find_value(section, key);
    return v ? parse_u64_value(*v, section + "." + key) : fallback;
}

std::vector<long> Config::get_long_list(const std::string& section, const std::string& key,
                                        std::vector<long> fallback) const {
    const std::string* v = find_value(section, key);
    if (!v) return fallback;
    std::vector<long> out;
    for (const auto& piece : split_list(*v))
        out.push_back(parse_long_value(piece, section + "." + key));
    if (out.empty()) throw ConfigError("config: empty list for " + section + "." + key);
    return out;
}

std::vector<double> Config::get_double_list(const std::string& section, const std::string& key,
                                            std::vector<double> fallback) const {
    const std::string* v = find_value(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& piece : split_list(*v))
        out.push_back(parse_double_value(piece, section + "." + key));
    if (out.empty()) throw ConfigError("config: empty list for " + section + "." + key);
    return out;
}

void Config::require_known_keys(const std::string& section,
                                const std::vector<std::string>& allowed) const {
    const Section* s = find_section(section);
    if (!s) return;
    for (const auto& [k, v] : s->entries)
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("config: unknown key '" + k + "' in [" + section + "]");
}

void Config::require_known_sections(const std::vector<std::string>& known) const {
    for (const auto& s : sections_)
        if (std::find(known.begin(), known.end(), s.name) == known.end())
            throw ConfigError("config: unknown section [" + s.name + "]");
}

long parse_long_value(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError("config: '" + s + "' is not an integer (" + what + ")");
    return v;
}

std::uint64_t parse_u64_value(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || t.front() == '-' || end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError("config: '" + s + "' is not an unsigned integer (" + what + ")");
    return v;
}

double parse_double_value(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError("config: '" + s + "' is not a number (" + what + ")");
    return v;
}

bool parse_bool_value(const std::string& s, const std::string& what) {
    std::string t = trim(s);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "off" || t == "no") return false;
    throw ConfigError("config: '" + s + "' is not a boolean (" + what + ")");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string piece;
    std::istringstream in(s);
    while (std::getline(in, piece, ',')) {
        piece = trim(piece);
        if (!piece.empty()) out.push_back(piece);
    }
    return out;
}

}  // namespace rbmlab
