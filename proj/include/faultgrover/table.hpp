// Copyright 2026 The faultgrover Authors
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
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace faultgrover {

/// Raised when an output file cannot be written.
struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

using Cell = std::variant<std::int64_t, double, std::string, bool>;

/// Column-named rows; the unit of experiment output.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) {
            throw std::logic_error("Table::add_row: expected " + std::to_string(columns.size()) +
                                   " cells, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) {
                return i;
            }
        }
        throw std::out_of_range("Table: no column " + name);
    }

    double number(std::size_t row, const std::string& name) const {
        const Cell& c = rows.at(row).at(column_index(name));
        if (const auto* d = std::get_if<double>(&c)) return *d;
        if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
        if (const auto* b = std::get_if<bool>(&c)) return *b ? 1.0 : 0.0;
        throw std::invalid_argument("Table: column " + name + " is not numeric");
    }
};

/// Shortest text that is exact at 17 significant digits.
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

/// Comma-separated, header row, LF line endings.
inline void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_cell(row[i]);
        }
        out << '\n';
    }
}

/// Array of row objects keyed by the column names. Non-finite reals become null.
inline nlohmann::ordered_json to_json(const Table& table) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        obj[table.columns[i]] = std::isfinite(v) ? nlohmann::ordered_json(v)
                                                                 : nlohmann::ordered_json(nullptr);
                    } else {
                        obj[table.columns[i]] = v;
                    }
                },
                row[i]);
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

inline void write_table(const Table& table, std::ostream& out, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        write_csv(table, out);
    } else {
        out << to_json(table).dump(2) << '\n';
    }
}

inline std::string render_table(const Table& table, OutputFormat format) {
    std::ostringstream os;
    write_table(table, os, format);
    return os.str();
}

inline void write_table_file(const Table& table, const std::string& path, OutputFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw OutputError("cannot open output file '" + path + "'");
    }
    write_table(table, out, format);
    out.flush();
    if (!out) {
        throw OutputError("failed writing output file '" + path + "'");
    }
}

}  // namespace faultgrover
