#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace zonalsim {

inline constexpr int kPeriodsPerDay = 48;
inline constexpr double kPeriodHours = 0.5;

enum class Band { North, South };

// Transfer capacity per direction. The unconstrained case is a flag, never a
// large number.
struct Capacity {
    double mw = 0.0;
    bool unconstrained = false;

    static Capacity limited(double mw) { return Capacity{mw, false}; }
    static Capacity unlimited() { return Capacity{0.0, true}; }
    bool operator==(const Capacity&) const = default;
};

struct Link {
    std::string from;
    std::string to;
    Capacity capacity;
    bool operator==(const Link&) const = default;
};

struct Boundary {
    std::string id;
    std::vector<std::size_t> members;  // indices into NetworkTopology::links
    bool operator==(const Boundary&) const = default;
};

struct NetworkTopology {
    std::vector<std::string> buses;
    std::vector<Link> links;
    std::map<std::string, std::string> zones;
    std::vector<Boundary> boundaries;
    std::map<std::string, Band> bands;

    bool operator==(const NetworkTopology&) const = default;

    std::optional<std::size_t> bus_index(const std::string& bus) const;
    std::vector<std::string> zone_ids() const;  // sorted, unique
};

enum class UnitKind { Simple, Thermal, DailyQuota, Storage, Interconnector };

enum class Tech {
    Wind,
    Solar,
    Nuclear,
    Hydro,
    Gas,
    Coal,
    Biomass,
    Oil,
    Battery,
    PumpedHydro,
    Ic
};

struct SubsidyScheme {
    enum class Variant { None, RO, CfD };
    Variant variant = Variant::None;
    // ROC value or CfD strike in GBP/MWh. An RO unit without a value has its
    // ROC inferred from bid history.
    std::optional<double> value;

    static SubsidyScheme none() { return {}; }
    static SubsidyScheme ro(std::optional<double> roc) { return {Variant::RO, roc}; }
    static SubsidyScheme cfd(double strike) { return {Variant::CfD, strike}; }
    bool operator==(const SubsidyScheme&) const = default;
};

struct Unit {
    std::string id;
    std::string bus;
    UnitKind kind = UnitKind::Simple;
    Tech tech = Tech::Wind;
    SubsidyScheme subsidy;
    double power_cap_mw = 0.0;     // storage, daily quota
    double energy_cap_mwh = 0.0;   // storage
    double damping = 1.0;          // storage
    double daily_quota_mwh = 0.0;  // daily quota
    double import_cap_mw = 0.0;    // interconnector
    double export_cap_mw = 0.0;    // interconnector
    double ramp_mw = 0.0;          // interconnector, per period
    double efficiency = 0.99;      // interconnector
    // Explicit bid / SRMC override in GBP/MWh. Empty means "estimate".
    std::optional<double> base_cost;

    bool operator==(const Unit&) const = default;

    bool is_generator() const {
        return kind == UnitKind::Simple || kind == UnitKind::Thermal ||
               kind == UnitKind::DailyQuota;
    }
    double effective_power_cap() const { return damping * power_cap_mw; }
    double effective_energy_cap() const { return damping * energy_cap_mwh; }
};

using UnitRegistry = std::vector<Unit>;

struct StackEntry {
    double price = 0.0;   // GBP/MWh
    double volume = 0.0;  // MWh
    bool operator==(const StackEntry&) const = default;
};

struct ObservedBalancingRecord {
    double congestion_volume = 0.0;  // MWh for the day
    std::vector<StackEntry> accepted_offers;
    std::vector<StackEntry> accepted_bids;
    bool operator==(const ObservedBalancingRecord&) const = default;
};

using Series = std::vector<double>;

struct CostCurve {
    std::string unit;
    double base_srmc = 0.0;
    Series corrected_srmc;  // one entry per period
    bool operator==(const CostCurve&) const = default;
};

struct DayScenario {
    std::string date;  // ISO-8601
    int periods = kPeriodsPerDay;
    std::shared_ptr<const UnitRegistry> units;
    std::map<std::string, Series> availability;    // generator units
    std::map<std::string, Series> load;            // buses
    Series day_ahead_price_gb;
    std::map<std::string, Series> neighbor_price;  // interconnectors
    std::map<std::string, Series> boundary_ntc;    // boundary ids
    ObservedBalancingRecord observed_balancing;
    std::map<std::string, CostCurve> marginal_costs;

    const Unit* find_unit(const std::string& id) const;
    double total_load(int t) const;
};

bool operator==(const DayScenario& a, const DayScenario& b);

std::vector<std::string> validate_scenario(const DayScenario& s, const NetworkTopology& t);

const char* to_string(UnitKind k);
const char* to_string(Tech t);
const char* to_string(Band b);
std::optional<UnitKind> parse_unit_kind(const std::string& s);
std::optional<Tech> parse_tech(const std::string& s);
std::optional<Band> parse_band(const std::string& s);

bool is_thermal_tech(Tech t);
bool is_renewable_tech(Tech t);

}  // namespace zonalsim
