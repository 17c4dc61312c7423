#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sqdyn_cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Value = std::variant<double, bool, std::string, std::vector<double>,
                           std::vector<std::string>>;

// Flat key/value view of a scenario: "[model]\nfamily = ..." becomes
// "model.family". Accepts a TOML-compatible subset (tables, strings, numbers,
// booleans, flat arrays) or a JSON object when the file ends in .json.
class Config {
  public:
    static Config load(const std::string& path);
    static Config from_toml_text(const std::string& text, const std::string& origin);
    static Config from_json_text(const std::string& text, const std::string& origin);

    void apply_override(const std::string& key_equals_value);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<double> numbers_or(const std::string& key,
                                   std::vector<double> fallback) const;

    const std::map<std::string, Value>& entries() const { return values_; }

  private:
    std::map<std::string, Value> values_;
};

} // namespace sqdyn_cli
