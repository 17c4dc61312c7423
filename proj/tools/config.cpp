#include "config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sqdyn_cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

Value parse_scalar(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError("empty value for key '" + key + "'");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ConfigError("unterminated string for key '" + key + "'");
        return s.substr(1, s.size() - 2);
    }
    if (s == "true") return true;
    if (s == "false") return false;
    double num = 0.0;
    if (parse_number(s, num)) return num;
    throw ConfigError("cannot parse value '" + s + "' for key '" + key + "'");
}

Value parse_array(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    std::vector<std::string> items;
    std::string cur;
    bool in_string = false;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        const char c = s[i];
        if (c == '"') in_string = !in_string;
        if (c == ',' && !in_string) {
            items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) items.push_back(cur);

    std::vector<double> nums;
    std::vector<std::string> strs;
    bool numeric = true;
    for (const auto& item : items) {
        const Value v = parse_scalar(item, key);
        if (std::holds_alternative<double>(v)) {
            nums.push_back(std::get<double>(v));
        } else if (std::holds_alternative<std::string>(v)) {
            numeric = false;
            strs.push_back(std::get<std::string>(v));
        } else {
            throw ConfigError("array for key '" + key + "' mixes types");
        }
    }
    if (numeric) return nums;
    if (strs.size() == items.size()) return strs;
    throw ConfigError("array for key '" + key + "' mixes types");
}

} // namespace

Config Config::from_toml_text(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed table header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": empty table name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key =
            (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (!raw.empty() && raw.front() == '[') {
            if (raw.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": unterminated array for key '" + key + "'");
            cfg.values_[key] = parse_array(raw, key);
        } else {
            cfg.values_[key] = parse_scalar(raw, key);
        }
    }
    return cfg;
}

Config Config::from_json_text(const std::string& text, const std::string& origin) {
    Config cfg;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& ex) {
        throw ConfigError(origin + ": " + ex.what());
    }
    std::function<void(const std::string&, const nlohmann::json&)> walk =
        [&](const std::string& prefix, const nlohmann::json& node) {
            if (node.is_object()) {
                for (auto it = node.begin(); it != node.end(); ++it)
                    walk(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
            } else if (node.is_number()) {
                cfg.values_[prefix] = node.get<double>();
            } else if (node.is_boolean()) {
                cfg.values_[prefix] = node.get<bool>();
            } else if (node.is_string()) {
                cfg.values_[prefix] = node.get<std::string>();
            } else if (node.is_array()) {
                if (!node.empty() && node.front().is_string()) {
                    cfg.values_[prefix] = node.get<std::vector<std::string>>();
                } else {
                    cfg.values_[prefix] = node.get<std::vector<double>>();
                }
            } else {
                throw ConfigError(origin + ": unsupported value for key '" + prefix + "'");
            }
        };
    walk("", doc);
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const bool json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    return json ? from_json_text(buf.str(), path) : from_toml_text(buf.str(), path);
}

void Config::apply_override(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key=value: '" + spec + "'");
    const std::string key = trim(spec.substr(0, eq));
    const std::string raw = trim(spec.substr(eq + 1));
    if (!raw.empty() && raw.front() == '[') {
        values_[key] = parse_array(raw, key);
        return;
    }
    // unquoted override strings are allowed on the command line
    try {
        values_[key] = parse_scalar(raw, key);
    } catch (const ConfigError&) {
        values_[key] = raw;
    }
}

double Config::number(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    throw ConfigError("key '" + key + "' is not a number");
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::string Config::text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
    throw ConfigError("key '" + key + "' is not a string");
}

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (const bool* v = std::get_if<bool>(&it->second)) return *v;
    throw ConfigError("key '" + key + "' is not a boolean");
}

std::vector<double> Config::numbers(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    if (const double* v = std::get_if<double>(&it->second)) return {*v};
    throw ConfigError("key '" + key + "' is not a numeric array");
}

std::vector<double> Config::numbers_or(const std::string& key,
                                       std::vector<double> fallback) const {
    return has(key) ? numbers(key) : fallback;
}

} // namespace sqdyn_cli
