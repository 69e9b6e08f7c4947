// Copyright 2026 The phasefe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "phasefe/core.hpp"

/// @file table.hpp
/// @brief Named-column result tables written as CSV with '#' metadata lines, or as JSON.

namespace phasefe {

using Cell = std::variant<double, long long, std::string>;

class ResultTable {
  public:
    ResultTable() = default;
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string> &columns() const { return columns_; }
    const std::vector<std::vector<Cell>> &rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>> &metadata() const { return meta_; }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size()) {
            throw DimensionError("ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                 std::to_string(columns_.size()));
        }
        rows_.push_back(std::move(row));
    }

    void add_meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }
    void add_meta(std::string key, double value) { meta_.emplace_back(std::move(key), format(value)); }

    std::size_t column(const std::string &name) const {
        for (std::size_t i = 0; i < columns_.size(); i++)
            if (columns_[i] == name) return i;
        throw DomainError("ResultTable: no column " + name);
    }

    double number(std::size_t row, const std::string &name) const {
        const Cell &c = rows_.at(row).at(column(name));
        if (auto *d = std::get_if<double>(&c)) return *d;
        if (auto *i = std::get_if<long long>(&c)) return static_cast<double>(*i);
        throw DomainError("ResultTable: column " + name + " is not numeric");
    }

    static std::string format(double v) {
        if (std::isnan(v)) return "nan";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }

    static std::string format(const Cell &c) {
        if (auto *d = std::get_if<double>(&c)) return format(*d);
        if (auto *i = std::get_if<long long>(&c)) return std::to_string(*i);
        return std::get<std::string>(c);
    }

    void write_csv(std::ostream &os) const {
        for (const auto &[k, v] : meta_) os << "# " << k << ": " << v << "\n";
        for (std::size_t i = 0; i < columns_.size(); i++) os << (i ? "," : "") << columns_[i];
        os << "\n";
        for (const auto &r : rows_) {
            for (std::size_t i = 0; i < r.size(); i++) os << (i ? "," : "") << format(r[i]);
            os << "\n";
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json meta = nlohmann::json::object();
        for (const auto &[k, v] : meta_) meta[k] = v;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &r : rows_) {
            nlohmann::json o = nlohmann::json::object();
            for (std::size_t i = 0; i < r.size(); i++) {
                if (auto *d = std::get_if<double>(&r[i])) {
                    if (std::isfinite(*d)) o[columns_[i]] = *d;
                    else o[columns_[i]] = nullptr;
                } else if (auto *n = std::get_if<long long>(&r[i])) {
                    o[columns_[i]] = *n;
                } else {
                    o[columns_[i]] = std::get<std::string>(r[i]);
                }
            }
            rows.push_back(o);
        }
        return {{"metadata", meta}, {"columns", columns_}, {"rows", rows}};
    }

    std::string csv() const {
        std::ostringstream s;
        write_csv(s);
        return s.str();
    }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

}  // namespace phasefe
