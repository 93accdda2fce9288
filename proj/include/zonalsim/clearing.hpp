#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonalsim/network.hpp"
#include "zonalsim/scenario.hpp"

namespace zonalsim {

struct ClearingOptions {
    double storage_initial_share = 0.5;  // of effective energy capacity
    double tie_perturbation = 1e-7;      // GBP/MWh, id-ranked
};

struct ClearingResult {
    Design design = Design::National;
    double tau = 1.0;
    int periods = kPeriodsPerDay;
    RegionMap regions;
    // Generators: output. Storage: discharge - charge. Interconnectors: net
    // GB-side import (negative = export).
    std::map<std::string, Series> dispatch;
    std::map<std::string, Series> charge, discharge, soc;  // storage
    std::map<std::string, Series> ic_import, ic_export;    // GB side, MW
    std::vector<Series> prices;                            // [region][period]
    std::map<std::size_t, Series> flows;                   // link index -> MW from->to
    double objective = 0.0;                                // GBP, unperturbed

    double price_at_bus(std::size_t bus, int t) const {
        return prices[static_cast<std::size_t>(regions.bus_region[bus])]
                     [static_cast<std::size_t>(t)];
    }
};

// Neighbour-side valuation of one MWh delivered to / sent from GB. Losses
// always work against GB, so the combined cost curve stays convex when the
// neighbour price is negative.
double ic_import_cost(double neighbor_price, double efficiency);
double ic_export_revenue(double neighbor_price, double efficiency);

// Perturbation per generator id, strictly increasing in lexicographic order.
std::map<std::string, double> tie_breaks(const UnitRegistry& units, double magnitude);

ClearingResult clear(const DayScenario& s, const NetworkTopology& topo, Design design,
                     double tau, const ClearingOptions& opt = {});

struct CongestionRent {
    Series intra;  // GBP per period
    Series ic;     // GBP per period, full value (GB share applied downstream)
};

CongestionRent congestion_rent(const ClearingResult& r, const DayScenario& s,
                               const NetworkTopology& topo);

enum class WindCase { Low, High, Extreme };
const char* to_string(WindCase c);

inline constexpr double kSplitEpsilon = 1.0;  // GBP/MWh

struct PriceSetter {
    std::string unit;  // empty when no generator is marginal
    Tech tech = Tech::Gas;
    double bid = 0.0;
};

// Marginal generator of a single-region (national) result at period t.
PriceSetter national_price_setter(const ClearingResult& national, const DayScenario& s, int t);

WindCase classify_period(const std::vector<double>& zonal_prices, const PriceSetter& setter);

}  // namespace zonalsim
