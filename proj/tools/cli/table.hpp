// Copyright 2026 The wenduality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wenduality/errors.hpp"
#include "wenduality/wen_model.hpp"

namespace wenduality::cli {

/// Column units: "E" is energy in the units of g and h, "1" is dimensionless,
/// "-" marks text or integer labels.
struct Column {
    std::string name;
    std::string unit;
};

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw DimensionMismatch("row width differs from the column count");
        rows.push_back(std::move(row));
    }
};

/// Everything a command writes besides its tables; the timestamp is kept out
/// of here on purpose and lives only in the sidecar metadata.
struct OutputHeader {
    std::string program = "wenduality";
    std::string version;
    std::string command;
    std::string config_hash;
};

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) return csv_escape(std::get<std::string>(c));
    return "";
}

inline std::string to_csv(const Table& t, const OutputHeader& p) {
    std::string s;
    s += "# " + p.program + " " + p.version + " " + p.command + " " + t.name + "\n";
    s += "# config_hash: " + p.config_hash + "\n";
    s += std::string("# sign_convention: ") + kSignConvention + "\n";
    s += "# units: [E] energy in the units of g and h; [1] dimensionless; [-] label\n";
    for (const auto& n : t.notes) s += "# note: " + n + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        s += (i ? "," : "") + t.columns[i].name + "[" + t.columns[i].unit + "]";
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + cell_text(row[i]);
        s += "\n";
    }
    return s;
}

/// Same columns and rows as the CSV; the JSON writer also emits round-trip
/// precision. Non-finite values become null.
inline nlohmann::ordered_json to_json(const Table& t, const OutputHeader& p) {
    nlohmann::ordered_json j;
    j["program"] = p.program;
    j["version"] = p.version;
    j["command"] = p.command;
    j["table"] = t.name;
    j["config_hash"] = p.config_hash;
    j["sign_convention"] = kSignConvention;
    j["units"] = "E: energy in the units of g and h; 1: dimensionless; -: label";
    j["notes"] = t.notes;
    auto cols = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    j["columns"] = cols;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& c = row[i];
            const auto& name = t.columns[i].name;
            if (std::holds_alternative<double>(c)) {
                const double x = std::get<double>(c);
                r[name] = std::isfinite(x) ? nlohmann::ordered_json(x)
                                           : nlohmann::ordered_json(nullptr);
            } else if (std::holds_alternative<long long>(c)) {
                r[name] = std::get<long long>(c);
            } else if (std::holds_alternative<std::string>(c)) {
                r[name] = std::get<std::string>(c);
            } else {
                r[name] = nullptr;
            }
        }
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j;
}

}  // namespace wenduality::cli
