#include "bvqlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bvqlab {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    return std::all_of(k.begin(), k.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    });
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) return std::nullopt;
    return v;
}

void flatten(const nlohmann::json& j, const std::string& prefix, Config& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
        return;
    }
    if (prefix.empty()) throw ConfigError("config: JSON top level must be an object");
    if (j.is_array()) {
        std::string joined;
        for (const auto& e : j) {
            if (!joined.empty()) joined += e.is_array() ? ";" : ",";
            if (e.is_array()) {
                std::string inner;
                for (const auto& c : e) inner += (inner.empty() ? "" : ",") + c.dump();
                joined += inner;
            } else {
                joined += e.is_string() ? e.get<std::string>() : e.dump();
            }
        }
        out.set(prefix, joined);
    } else if (j.is_string()) {
        out.set(prefix, j.get<std::string>());
    } else if (j.is_null()) {
        throw ConfigError("config: key '" + prefix + "' is null");
    } else {
        out.set(prefix, j.dump());
    }
}

}  // namespace

Config Config::parse_text(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(n) + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError("config line " + std::to_string(n) + ": malformed key '" + key + "'");
        if (c.values_.count(key))
            throw ConfigError("config line " + std::to_string(n) + ": duplicate key '" + key + "'");
        c.values_[key] = value;
        c.lines_[key] = n;
    }
    return c;
}

Config Config::parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    Config c;
    flatten(j, "", c);
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (path.extension() == ".json" || (first != std::string::npos && text[first] == '{')) return parse_json(text);
    return parse_text(text);
}

void Config::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) throw ConfigError("config: malformed key '" + key + "'");
    values_[key] = value;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::where(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? "config key '" + key + "'"
                              : "config line " + std::to_string(it->second) + ": key '" + key + "'";
}

std::string Config::get_string(const std::string& key, const std::optional<std::string>& fallback) const {
    const auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    if (fallback) return *fallback;
    throw ConfigError("config: missing required key '" + key + "'");
}

double Config::get_double(const std::string& key, const std::optional<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing required key '" + key + "'");
    }
    const auto v = to_double(it->second);
    if (!v) throw ConfigError(where(key) + ": expected a number, got '" + it->second + "'");
    return *v;
}

int Config::get_int(const std::string& key, const std::optional<int>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing required key '" + key + "'");
    }
    int v = 0;
    const auto& s = it->second;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ConfigError(where(key) + ": expected an integer, got '" + s + "'");
    return v;
}

bool Config::get_bool(const std::string& key, const std::optional<bool>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing required key '" + key + "'");
    }
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError(where(key) + ": expected true or false, got '" + it->second + "'");
}

std::vector<double> Config::get_list(const std::string& key, const std::optional<std::vector<double>>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        if (fallback) return *fallback;
        throw ConfigError("config: missing required key '" + key + "'");
    }
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = to_double(trim(item));
        if (!v) throw ConfigError(where(key) + ": expected a comma-separated list of numbers");
        out.push_back(*v);
    }
    if (out.empty()) throw ConfigError(where(key) + ": empty list");
    return out;
}

std::vector<std::vector<double>> Config::get_points(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config: missing required key '" + key + "'");
    std::vector<std::vector<double>> pts;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (trim(item).empty()) continue;
        std::vector<double> p;
        std::stringstream cs(item);
        std::string c;
        while (std::getline(cs, c, ',')) {
            const auto v = to_double(trim(c));
            if (!v) throw ConfigError(where(key) + ": malformed point '" + trim(item) + "'");
            p.push_back(*v);
        }
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw ConfigError(where(key) + ": no points given");
    return pts;
}

std::map<std::string, std::string> Config::with_prefix(const std::string& prefix) const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : values_)
        if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0) out[k.substr(prefix.size())] = v;
    return out;
}

void Config::require_known(const std::vector<std::string>& names, const std::vector<std::string>& prefixes) const {
    for (const auto& [k, v] : values_) {
        if (std::find(names.begin(), names.end(), k) != names.end()) continue;
        const bool prefixed = std::any_of(prefixes.begin(), prefixes.end(), [&](const std::string& p) {
            return k.size() > p.size() && k.compare(0, p.size(), p) == 0;
        });
        if (!prefixed) throw ConfigError(where(k) + ": unknown key");
    }
}

}  // namespace bvqlab
