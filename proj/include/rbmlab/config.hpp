#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rbmlab {

// Malformed file, unknown key, or value of the wrong shape. The CLI maps
// this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat [section] key = value text. One section per command, no nesting.
// '#' and ';' start comments; keys and values are trimmed. Duplicate keys
// within a section and keys outside any section are errors.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<config>");

    const std::string& text() const { return text_; }

    bool has_section(const std::string& section) const;
    std::vector<std::string> section_names() const;

    bool has(const std::string& section, const std::string& key) const;
    std::vector<std::pair<std::string, std::string>> items(const std::string& section) const;

    // Typed getters; the two-argument forms throw ConfigError when missing.
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    std::vector<long> get_long_list(const std::string& section, const std::string& key,
                                    std::vector<long> fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const;

    // Rejects keys in `section` outside `allowed` and section names outside
    // `known_sections` (when non-empty).
    void require_known_keys(const std::string& section,
                            const std::vector<std::string>& allowed) const;
    void require_known_sections(const std::vector<std::string>& known) const;

private:
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;
    };

    const Section* find_section(const std::string& name) const;
    const std::string* find_value(const std::string& section, const std::string& key) const;

    std::string origin_;
    std::string text_;
    std::vector<Section> sections_;
};

// Shared value parsers (also used for CLI argument validation).
long parse_long_value(const std::string& s, const std::string& what);
double parse_double_value(const std::string& s, const std::string& what);
std::uint64_t parse_u64_value(const std::string& s, const std::string& what);
bool parse_bool_value(const std::string& s, const std::string& what);
std::vector<std::string> split_list(const std::string& s);

}  // namespace rbmlab
