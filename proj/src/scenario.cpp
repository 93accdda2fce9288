#include "zonalsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace zonalsim {

std::optional<std::size_t> NetworkTopology::bus_index(const std::string& bus) const {
    auto it = std::find(buses.begin(), buses.end(), bus);
    if (it == buses.end()) return std::nullopt;
    return static_cast<std::size_t>(it - buses.begin());
}

std::vector<std::string> NetworkTopology::zone_ids() const {
    std::set<std::string> ids;
    for (const auto& [bus, zone] : zones) ids.insert(zone);
    return {ids.begin(), ids.end()};
}

const Unit* DayScenario::find_unit(const std::string& id) const {
    if (!units) return nullptr;
    for (const auto& u : *units)
        if (u.id == id) return &u;
    return nullptr;
}

double DayScenario::total_load(int t) const {
    double sum = 0.0;
    for (const auto& [bus, series] : load) sum += series.at(static_cast<std::size_t>(t));
    return sum;
}

bool operator==(const DayScenario& a, const DayScenario& b) {
    const bool units_equal = (a.units == b.units) || (a.units && b.units && *a.units == *b.units);
    return units_equal && a.date == b.date && a.periods == b.periods &&
           a.availability == b.availability && a.load == b.load &&
           a.day_ahead_price_gb == b.day_ahead_price_gb &&
           a.neighbor_price == b.neighbor_price && a.boundary_ntc == b.boundary_ntc &&
           a.observed_balancing == b.observed_balancing &&
           a.marginal_costs == b.marginal_costs;
}

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

class Checker {
public:
    explicit Checker(int periods) : periods_(periods) {}

    void fail(std::string msg) { out_.push_back(std::move(msg)); }

    void series(const std::string& what, const Series& s, bool nonneg) {
        if (static_cast<int>(s.size()) != periods_) {
            fail(what + " has " + std::to_string(s.size()) + " periods, expected " +
                 std::to_string(periods_));
            return;
        }
        for (std::size_t t = 0; t < s.size(); ++t) {
            if (!std::isfinite(s[t]) || (nonneg && s[t] < 0.0)) {
                fail(what + " invalid at period " + std::to_string(t + 1));
                return;
            }
        }
    }

    template <class Keys>
    void total_map(const std::string& what, const std::map<std::string, Series>& m,
                   const Keys& keys, bool nonneg) {
        for (const auto& k : keys) {
            auto it = m.find(k);
            if (it == m.end())
                fail(what + " missing for " + k);
            else
                series(what + " of " + k, it->second, nonneg);
        }
        for (const auto& [k, v] : m)
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                fail(what + " references unknown key " + k);
    }

    std::vector<std::string> take() { return std::move(out_); }

private:
    int periods_;
    std::vector<std::string> out_;
};

void check_topology(Checker& c, const NetworkTopology& topo) {
    std::set<std::string> buses(topo.buses.begin(), topo.buses.end());
    if (buses.size() != topo.buses.size()) c.fail("duplicate bus id");
    for (std::size_t i = 0; i < topo.links.size(); ++i) {
        const auto& l = topo.links[i];
        if (!buses.count(l.from) || !buses.count(l.to))
            c.fail("link " + std::to_string(i) + " has undeclared endpoint");
        if (l.from == l.to) c.fail("link " + std::to_string(i) + " is a self-loop");
        if (!l.capacity.unconstrained && !finite_nonneg(l.capacity.mw))
            c.fail("link " + std::to_string(i) + " capacity invalid");
    }
    std::set<std::string> boundary_ids;
    for (const auto& b : topo.boundaries) {
        if (!boundary_ids.insert(b.id).second) c.fail("duplicate boundary " + b.id);
        for (auto m : b.members)
            if (m >= topo.links.size())
                c.fail("boundary " + b.id + " references undeclared link " + std::to_string(m));
    }
    for (const auto& bus : topo.buses) {
        if (!topo.zones.count(bus)) c.fail("bus " + bus + " has no zone");
        if (!topo.bands.count(bus)) c.fail("bus " + bus + " has no band");
    }
    for (const auto& [bus, z] : topo.zones)
        if (!buses.count(bus)) c.fail("zone map references unknown bus " + bus);
    for (const auto& [bus, b] : topo.bands)
        if (!buses.count(bus)) c.fail("band map references unknown bus " + bus);
}

void check_unit(Checker& c, const Unit& u, const std::set<std::string>& buses) {
    const std::string tag = "unit " + u.id + ": ";
    if (!buses.count(u.bus)) c.fail(tag + "unknown bus " + u.bus);
    switch (u.subsidy.variant) {
        case SubsidyScheme::Variant::None:
            break;
        case SubsidyScheme::Variant::RO:
            if (u.subsidy.value && !(*u.subsidy.value > 0.0)) c.fail(tag + "roc must be positive");
            break;
        case SubsidyScheme::Variant::CfD:
            if (!u.subsidy.value || !(*u.subsidy.value > 0.0))
                c.fail(tag + "strike must be positive");
            break;
    }
    switch (u.kind) {
        case UnitKind::Storage:
            if (!(u.damping > 0.0 && u.damping <= 1.0)) c.fail("damping out of range");
            if (!finite_nonneg(u.power_cap_mw) || !finite_nonneg(u.energy_cap_mwh))
                c.fail(tag + "storage caps invalid");
            break;
        case UnitKind::Interconnector:
            if (!(u.efficiency > 0.0 && u.efficiency <= 1.0)) c.fail(tag + "efficiency out of range");
            if (!finite_nonneg(u.import_cap_mw) || !finite_nonneg(u.export_cap_mw) ||
                !finite_nonneg(u.ramp_mw))
                c.fail(tag + "interconnector caps invalid");
            break;
        case UnitKind::DailyQuota:
            if (!finite_nonneg(u.daily_quota_mwh) || !finite_nonneg(u.power_cap_mw))
                c.fail(tag + "quota caps invalid");
            break;
        case UnitKind::Simple:
        case UnitKind::Thermal:
            break;
    }
    if (u.base_cost && !std::isfinite(*u.base_cost)) c.fail(tag + "base cost not finite");
}

}  // namespace

std::vector<std::string> validate_scenario(const DayScenario& s, const NetworkTopology& topo) {
    Checker c(s.periods);
    if (s.periods != kPeriodsPerDay) c.fail("period count != 48");
    check_topology(c, topo);

    std::set<std::string> buses(topo.buses.begin(), topo.buses.end());
    std::vector<std::string> generators, ics;
    if (!s.units) {
        c.fail("unit registry missing");
    } else {
        std::set<std::string> ids;
        for (const auto& u : *s.units) {
            if (!ids.insert(u.id).second) c.fail("duplicate unit id " + u.id);
            check_unit(c, u, buses);
            if (u.is_generator()) generators.push_back(u.id);
            if (u.kind == UnitKind::Interconnector) ics.push_back(u.id);
        }
    }
    std::vector<std::string> boundary_ids;
    for (const auto& b : topo.boundaries) boundary_ids.push_back(b.id);

    c.total_map("availability", s.availability, generators, true);
    c.total_map("load", s.load, topo.buses, true);
    c.series("day-ahead price", s.day_ahead_price_gb, false);
    c.total_map("neighbor price", s.neighbor_price, ics, false);
    c.total_map("boundary ntc", s.boundary_ntc, boundary_ids, true);

    const auto& ob = s.observed_balancing;
    if (!finite_nonneg(ob.congestion_volume)) c.fail("congestion volume invalid");
    for (const auto& e : ob.accepted_offers)
        if (!finite_nonneg(e.volume) || !std::isfinite(e.price)) c.fail("offer entry invalid");
    for (const auto& e : ob.accepted_bids)
        if (!finite_nonneg(e.volume) || !std::isfinite(e.price)) c.fail("bid entry invalid");
    return c.take();
}

namespace {
struct KindName {
    UnitKind k;
    const char* name;
};
constexpr KindName kKinds[] = {{UnitKind::Simple, "simple"},
                               {UnitKind::Thermal, "thermal"},
                               {UnitKind::DailyQuota, "quota"},
                               {UnitKind::Storage, "storage"},
                               {UnitKind::Interconnector, "interconnector"}};
struct TechName {
    Tech t;
    const char* name;
};
constexpr TechName kTechs[] = {{Tech::Wind, "wind"},       {Tech::Solar, "solar"},
                               {Tech::Nuclear, "nuclear"}, {Tech::Hydro, "hydro"},
                               {Tech::Gas, "gas"},         {Tech::Coal, "coal"},
                               {Tech::Biomass, "biomass"}, {Tech::Oil, "oil"},
                               {Tech::Battery, "battery"}, {Tech::PumpedHydro, "pumped-hydro"},
                               {Tech::Ic, "ic"}};
}  // namespace

const char* to_string(UnitKind k) {
    for (const auto& e : kKinds)
        if (e.k == k) return e.name;
    return "?";
}
const char* to_string(Tech t) {
    for (const auto& e : kTechs)
        if (e.t == t) return e.name;
    return "?";
}
const char* to_string(Band b) { return b == Band::North ? "north" : "south"; }

std::optional<UnitKind> parse_unit_kind(const std::string& s) {
    for (const auto& e : kKinds)
        if (s == e.name) return e.k;
    return std::nullopt;
}
std::optional<Tech> parse_tech(const std::string& s) {
    for (const auto& e : kTechs)
        if (s == e.name) return e.t;
    return std::nullopt;
}
std::optional<Band> parse_band(const std::string& s) {
    if (s == "north") return Band::North;
    if (s == "south") return Band::South;
    return std::nullopt;
}

bool is_thermal_tech(Tech t) {
    return t == Tech::Gas || t == Tech::Coal || t == Tech::Biomass || t == Tech::Oil;
}
bool is_renewable_tech(Tech t) {
    return t == Tech::Wind || t == Tech::Solar || t == Tech::Hydro;
}

}  // namespace zonalsim
