#include "eigengrowth/report.hpp"

#include "eigengrowth/error.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "cli";

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw ConfigError(kModule, "cannot write " + path.string());
}

}  // namespace

Json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

Json json_numbers(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(json_number(x));
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) {
        throw PreconditionError(kModule, "CSV row width differs from the header of " + name);
    }
    rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_field(fields[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

Json Report::deterministic_body() const {
    Json copy = body;
    copy.erase("runtime");
    return copy;
}

void write_report(const Report& report, const std::string& dir, const std::string& stem) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError(kModule, "cannot create output directory " + dir + ": " + ec.message());
    write_file(fs::path(dir) / (stem + ".json"), report.body.dump(2) + "\n");
    for (const CsvTable& t : report.tables) {
        write_file(fs::path(dir) / (stem + "_" + t.name + ".csv"), t.render());
    }
}

}  // namespace eigengrowth
