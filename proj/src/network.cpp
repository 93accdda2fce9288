#include "zonalsim/network.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace zonalsim {

const char* to_string(Design d) {
    switch (d) {
        case Design::National: return "national";
        case Design::Zonal: return "zonal";
        case Design::Nodal: return "nodal";
    }
    return "?";
}

std::optional<Design> parse_design(const std::string& s) {
    if (s == "national") return Design::National;
    if (s == "zonal") return Design::Zonal;
    if (s == "nodal") return Design::Nodal;
    return std::nullopt;
}

RegionMap make_regions(const NetworkTopology& topo, Design design) {
    RegionMap r;
    r.bus_region.resize(topo.buses.size(), 0);
    switch (design) {
        case Design::National:
            r.names = {"GB"};
            break;
        case Design::Zonal: {
            r.names = topo.zone_ids();
            for (std::size_t b = 0; b < topo.buses.size(); ++b) {
                const auto& zone = topo.zones.at(topo.buses[b]);
                r.bus_region[b] = static_cast<int>(
                    std::lower_bound(r.names.begin(), r.names.end(), zone) - r.names.begin());
            }
            break;
        }
        case Design::Nodal:
            r.names = topo.buses;
            for (std::size_t b = 0; b < topo.buses.size(); ++b) r.bus_region[b] = static_cast<int>(b);
            break;
    }
    return r;
}

std::vector<std::vector<double>> scaled_link_capacity(const NetworkTopology& topo,
                                                      const DayScenario& s, double tau) {
    const auto periods = static_cast<std::size_t>(s.periods);
    const std::size_t n = topo.links.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    // Boundary scale s_{b,t} = ntc / sum of constrained member capacities.
    std::vector<std::vector<double>> scale(topo.boundaries.size());
    std::vector<int> member_of(n, -1);
    for (std::size_t b = 0; b < topo.boundaries.size(); ++b) {
        const auto& bd = topo.boundaries[b];
        double cap = 0.0;
        for (auto m : bd.members) {
            member_of[m] = static_cast<int>(b);
            if (!topo.links[m].capacity.unconstrained) cap += topo.links[m].capacity.mw;
        }
        const auto& ntc = s.boundary_ntc.at(bd.id);
        scale[b].assign(periods, 1.0);
        if (cap > 0.0)
            for (std::size_t t = 0; t < periods; ++t) scale[b][t] = ntc.at(t) / cap;
    }

    // Buses touched by each boundary's members.
    std::map<std::string, std::set<std::size_t>> bus_boundaries;
    for (std::size_t l = 0; l < n; ++l) {
        if (member_of[l] < 0) continue;
        const auto b = static_cast<std::size_t>(member_of[l]);
        bus_boundaries[topo.links[l].from].insert(b);
        bus_boundaries[topo.links[l].to].insert(b);
    }

    std::vector<std::vector<double>> out(n, std::vector<double>(periods, inf));
    for (std::size_t l = 0; l < n; ++l) {
        const auto& link = topo.links[l];
        if (link.capacity.unconstrained) continue;
        const double c = link.capacity.mw;
        if (member_of[l] >= 0) {
            const auto& sc = scale[static_cast<std::size_t>(member_of[l])];
            for (std::size_t t = 0; t < periods; ++t) out[l][t] = tau * sc[t] * c;
            continue;
        }
        std::set<std::size_t> adjacent;
        for (const auto* bus : {&link.from, &link.to}) {
            auto it = bus_boundaries.find(*bus);
            if (it != bus_boundaries.end()) adjacent.insert(it->second.begin(), it->second.end());
        }
        for (std::size_t t = 0; t < periods; ++t) {
            if (adjacent.empty()) {
                out[l][t] = c;
                continue;
            }
            double smin = inf;
            for (auto b : adjacent) smin = std::min(smin, scale[b][t]);
            out[l][t] = tau * smin * c;
        }
    }
    return out;
}

std::vector<ActiveLink> active_links(const NetworkTopology& topo, const DayScenario& s,
                                     const RegionMap& regions, double tau) {
    std::map<std::string, std::size_t> index;
    for (std::size_t b = 0; b < topo.buses.size(); ++b) index[topo.buses[b]] = b;
    const auto caps = scaled_link_capacity(topo, s, tau);
    std::vector<ActiveLink> out;
    for (std::size_t l = 0; l < topo.links.size(); ++l) {
        const auto& link = topo.links[l];
        const int rf = regions.bus_region[index.at(link.from)];
        const int rt = regions.bus_region[index.at(link.to)];
        if (rf == rt) continue;
        ActiveLink a;
        a.link = l;
        a.from_region = rf;
        a.to_region = rt;
        a.unconstrained = link.capacity.unconstrained;
        a.cap = caps[l];
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace zonalsim
