#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <ostream>

#include "zonalsim/runner.hpp"

namespace zonalsim {

// Money in result files is integer milli-pounds.
inline std::int64_t to_milli(double gbp) { return static_cast<std::int64_t>(std::llround(gbp * 1000.0)); }

// Writes day-<date>.json per day, monthly.csv, welfare.csv, units.csv,
// policy.csv (when a policy ran) and summary.json.
void write_results(const RunResults& results, const std::filesystem::path& dir);

// Summary tables of a results directory. Throws DataError when the directory
// holds no results.
void print_report(const std::filesystem::path& dir, std::ostream& out);

}  // namespace zonalsim
