#include "mdpa/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mdpa {

void CsvTable::add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_meta(std::string key, double value) {
    metadata.emplace_back(std::move(key), format_double(value));
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string to_csv(const CsvTable& table) {
    if (table.name.empty()) throw std::invalid_argument("CsvTable: name must not be empty");
    if (table.header.empty()) throw std::invalid_argument("CsvTable: header must not be empty");
    std::string out;
    for (const auto& [key, value] : table.metadata) {
        out += "# ";
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i > 0) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("CsvTable: row width does not match the header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string write_csv(const CsvTable& table, const std::string& dir) {
    std::string doc = to_csv(table);
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / (table.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc;
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
    return path.string();
}

}  // namespace mdpa
