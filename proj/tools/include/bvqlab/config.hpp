#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvqlab {

// Invalid experiment configuration; the message names the key and, for the
// dotted format, the line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key/value view of an experiment config. Two inputs map onto it:
//
//   # dotted text, one assignment per line
//   schema = 1
//   field.gallery = step1d
//   field.param.jump = 1
//
// and JSON objects, whose nesting is flattened to the same dotted keys.
class Config {
public:
    static Config parse_text(const std::string& text);
    static Config parse_json(const std::string& text);
    // Chooses the format from the extension (.json) or a leading '{'.
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::optional<std::string>& fallback = std::nullopt) const;
    double get_double(const std::string& key, const std::optional<double>& fallback = std::nullopt) const;
    int get_int(const std::string& key, const std::optional<int>& fallback = std::nullopt) const;
    bool get_bool(const std::string& key, const std::optional<bool>& fallback = std::nullopt) const;
    std::vector<double> get_list(const std::string& key, const std::optional<std::vector<double>>& fallback = std::nullopt) const;
    // Points separated by ';', coordinates by ','.
    std::vector<std::vector<double>> get_points(const std::string& key) const;

    // Keys below prefix (prefix stripped), e.g. field.param.
    std::map<std::string, std::string> with_prefix(const std::string& prefix) const;
    // Throws ConfigError on the first key that matches neither a name nor a prefix.
    void require_known(const std::vector<std::string>& names, const std::vector<std::string>& prefixes) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

private:
    std::string where(const std::string& key) const;
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
};

}  // namespace bvqlab
