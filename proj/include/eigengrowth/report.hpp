#pragma once

#include "json.hpp"

#include <string>
#include <vector>

namespace eigengrowth {

using Json = nlohmann::ordered_json;

/// Finite values as numbers; ±inf and NaN as the strings "inf", "-inf", "nan".
Json json_number(double v);
Json json_numbers(const std::vector<double>& v);

/// Shortest round-trip decimal form.
std::string format_number(double v);

struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string render() const;
};

struct Report {
    Json body;
    std::vector<CsvTable> tables;

    /// Copy of the body without the "runtime" block (wall clock, workers).
    Json deterministic_body() const;
};

/// Writes <dir>/<stem>.json and <dir>/<stem>_<table>.csv; creates dir.
void write_report(const Report& report, const std::string& dir, const std::string& stem);

}  // namespace eigengrowth
