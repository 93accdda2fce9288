#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zonalsim {

// Plain comma-separated table with a header row. No quoting.
struct CsvTable {
    std::filesystem::path file;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lines;  // source line number of each row

    int column(const std::string& name) const;           // -1 when absent
    int require_column(const std::string& name) const;   // throws
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CsvTable read_csv(const std::filesystem::path& file);

// Field accessors that throw DataError naming file, line and field.
double field_double(const CsvTable& t, std::size_t row, int col);
std::optional<double> field_optional_double(const CsvTable& t, std::size_t row, int col);
int field_int(const CsvTable& t, std::size_t row, int col);
const std::string& field(const CsvTable& t, std::size_t row, int col);
[[noreturn]] void field_error(const CsvTable& t, std::size_t row, int col, const std::string& why);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace zonalsim
