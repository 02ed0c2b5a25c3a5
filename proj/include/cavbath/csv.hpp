// csv.hpp — deterministic CSV/text emission helpers

#pragma once

#include <string>
#include <vector>

namespace cavbath {

// Shortest round-trippable decimal form ("%.17g"), '.' decimal point, no
// locale dependence.  CSV rows built from these are byte-stable across runs.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string to_string() const;  // comma-separated, LF line endings
};

// Writes content to path in binary mode (LF endings preserved).
void write_file(const std::string& path, const std::string& content);

} // namespace cavbath
