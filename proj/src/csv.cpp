#include "zonalsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace zonalsim {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

int CsvTable::require_column(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw DataError(file.string() + ": missing column '" + name + "'");
    return c;
}

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError(file.string() + ": cannot open");
    CsvTable t;
    t.file = file;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (t.header.empty()) {
            t.header = split(line);
            continue;
        }
        auto cells = split(line);
        if (cells.size() != t.header.size())
            throw DataError(file.string() + ":" + std::to_string(n) + ": expected " +
                            std::to_string(t.header.size()) + " fields, got " +
                            std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.lines.push_back(n);
    }
    if (t.header.empty()) throw DataError(file.string() + ": empty file, header expected");
    return t;
}

void field_error(const CsvTable& t, std::size_t row, int col, const std::string& why) {
    throw DataError(t.file.string() + ":" + std::to_string(t.lines.at(row)) + ": field '" +
                    t.header.at(static_cast<std::size_t>(col)) + "' " + why);
}

const std::string& field(const CsvTable& t, std::size_t row, int col) {
    return t.rows.at(row).at(static_cast<std::size_t>(col));
}

std::optional<double> field_optional_double(const CsvTable& t, std::size_t row, int col) {
    const auto& s = field(t, row, col);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        field_error(t, row, col, "is not a number: '" + s + "'");
    return v;
}

double field_double(const CsvTable& t, std::size_t row, int col) {
    auto v = field_optional_double(t, row, col);
    if (!v) field_error(t, row, col, "is empty");
    return *v;
}

int field_int(const CsvTable& t, std::size_t row, int col) {
    const auto& s = field(t, row, col);
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        field_error(t, row, col, "is not an integer: '" + s + "'");
    return v;
}

std::string format_double(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace zonalsim
