#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zonalsim/cost_model.hpp"
#include "zonalsim/csv.hpp"
#include "zonalsim/scenario.hpp"

namespace zonalsim {

struct Bundle {
    NetworkTopology topology;
    std::shared_ptr<const UnitRegistry> units;
    std::vector<DayScenario> days;  // ascending by date
    CostHistory history;
};

struct DateRange {
    std::optional<std::string> from;
    std::optional<std::string> to;
    bool contains(const std::string& d) const {
        return (!from || d >= *from) && (!to || d <= *to);
    }
};

// Reads a scenario bundle directory. Days outside `range` are skipped without
// being parsed. Every returned day passes validate_scenario.
Bundle load_bundle(const std::filesystem::path& dir, const DateRange& range = {});

// Dates for which the bundle has a day directory, ascending.
std::vector<std::string> bundle_dates(const std::filesystem::path& dir);

void write_bundle(const Bundle& b, const std::filesystem::path& dir);

}  // namespace zonalsim
