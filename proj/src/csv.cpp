#include "cavbath/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cavbath {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::string out;
    auto append = [&out](const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    append(header);
    for (const auto& row : rows) append(row);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("short write to " + path);
}

} // namespace cavbath
