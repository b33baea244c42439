#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mdpa {

/// One rectangular numeric table destined for `<name>.csv`: '#'-prefixed
/// metadata comment lines (key = value), a header row, and numeric rows.
/// All numbers are written with 17 significant digits so parsing the file
/// back reproduces the doubles exactly.
struct CsvTable {
    std::string name;  // file stem without extension
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_meta(std::string key, std::string value);
    void add_meta(std::string key, double value);
};

/// Round-trip-safe decimal rendering of a double (17 significant digits).
std::string format_double(double x);

/// Renders the whole document; throws std::invalid_argument when the table
/// is not rectangular or the name/header is empty.
std::string to_csv(const CsvTable& table);

/// Writes `<dir>/<name>.csv`, creating `dir` if needed.
std::string write_csv(const CsvTable& table, const std::string& dir);

}  // namespace mdpa
