#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace sqdyn_cli {

// Deterministic formatting: 17 significant digits, '.' decimal point,
// '\n' line endings regardless of platform.
inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Tabular result; lands as name.csv or name.json depending on --format.
class Table {
  public:
    Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void row(const std::vector<double>& values) {
        if (values.size() != columns_.size())
            throw std::runtime_error("table row width mismatch");
        rows_.push_back(values);
    }

    void write(const std::filesystem::path& dir, const std::string& name,
               bool as_json) const {
        if (as_json) {
            nlohmann::json doc;
            doc["columns"] = columns_;
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& r : rows_) {
                nlohmann::json rj = nlohmann::json::array();
                for (double v : r) {
                    if (std::isfinite(v))
                        rj.push_back(v);
                    else
                        rj.push_back(fmt17(v));
                }
                rows.push_back(rj);
            }
            doc["rows"] = rows;
            std::ofstream out(dir / (name + ".json"), std::ios::binary);
            if (!out) throw std::runtime_error("cannot open output file " + name);
            out << doc.dump(2) << "\n";
            return;
        }
        std::ofstream out(dir / (name + ".csv"), std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + name);
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out << (i ? "," : "") << columns_[i];
        out << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i)
                out << (i ? "," : "") << fmt17(r[i]);
            out << "\n";
        }
    }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

} // namespace sqdyn_cli
