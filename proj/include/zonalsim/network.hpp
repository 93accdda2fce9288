#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zonalsim/scenario.hpp"

namespace zonalsim {

enum class Design { National, Zonal, Nodal };

const char* to_string(Design d);
std::optional<Design> parse_design(const std::string& s);

// Price regions of a design: one for national, one per zone, one per bus.
struct RegionMap {
    std::vector<std::string> names;
    std::vector<int> bus_region;  // indexed like NetworkTopology::buses
};

RegionMap make_regions(const NetworkTopology& topo, Design design);

// Links that cross region borders, with per-period capacity after boundary
// scaling and the tuning factor.
struct ActiveLink {
    std::size_t link = 0;
    int from_region = 0;
    int to_region = 0;
    bool unconstrained = false;
    std::vector<double> cap;  // per period, MW per direction
};

std::vector<ActiveLink> active_links(const NetworkTopology& topo, const DayScenario& s,
                                     const RegionMap& regions, double tau);

// Scaled capacity of every link for every period: [link][period]. Unconstrained
// links carry +inf.
std::vector<std::vector<double>> scaled_link_capacity(const NetworkTopology& topo,
                                                      const DayScenario& s, double tau);

}  // namespace zonalsim
