#pragma once

#include <chrono>
#include <optional>
#include <string>

namespace zonalsim {

// Strict YYYY-MM-DD.
std::optional<std::chrono::sys_days> parse_date(const std::string& s);
std::string format_date(std::chrono::sys_days d);
std::string add_days(const std::string& date, int days);
inline std::string month_of(const std::string& date) { return date.substr(0, 7); }

}  // namespace zonalsim
