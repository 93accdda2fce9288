#pragma once

#include <map>
#include <memory>
#include <string>

#include "zonalsim/clearing.hpp"

namespace zonalsim {

struct RedispatchOptions {
    double deviation_penalty = 1e-4;  // GBP/MWh on |nodal - wholesale|
    ClearingOptions clearing;
};

// Nodal re-optimisation of generators around a fixed wholesale schedule.
// Storage and interconnector positions are taken from the wholesale result.
// The model is built once; solving at a new tuning factor only moves link
// bounds and warm-starts from the previous basis.
class RedispatchModel {
public:
    RedispatchModel(const ClearingResult& wholesale, const DayScenario& s,
                    const NetworkTopology& topo, const RedispatchOptions& opt = {});
    ~RedispatchModel();
    RedispatchModel(const RedispatchModel&) = delete;
    RedispatchModel& operator=(const RedispatchModel&) = delete;

    ClearingResult solve(double tau);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

ClearingResult redispatch(const ClearingResult& wholesale, const DayScenario& s,
                          const NetworkTopology& topo, double tau,
                          const RedispatchOptions& opt = {});

// unit id -> group label; must partition the generator units.
using GroupMap = std::map<std::string, std::string>;

// {technology} x {north, south} by the unit's bus band.
GroupMap default_groups(const DayScenario& s, const NetworkTopology& topo);

struct BalancingOutcome {
    std::map<std::string, Series> group_up, group_down;  // MWh per period
    Series period_up, period_down;                       // MWh per period
    double volume_up = 0.0;                              // MWh
    double volume_down = 0.0;                            // MWh
    std::map<std::string, Series> unit_up, unit_down;    // attributed MWh per period

    double congestion_volume() const { return volume_up + volume_down; }
};

BalancingOutcome balancing_volume(const ClearingResult& wholesale, const ClearingResult& nodal,
                                  const GroupMap& groups);

struct BalancingPrice {
    double cost_offers = 0.0;   // GBP paid for volume_up
    double receipt_bids = 0.0;  // GBP, sum of bid price x volume
    double bm_cost = 0.0;       // cost_offers - receipt_bids
    double mean_offer = 0.0;    // GBP/MWh over the consumed offers
    double mean_bid = 0.0;      // GBP/MWh over the consumed bids
    Series period_cost;                         // GBP per period
    std::map<std::string, double> unit_revenue; // GBP per unit for the day
    std::map<std::string, Series> unit_period_revenue;
    int exhausted_warnings = 0;
};

BalancingPrice price_balancing(const BalancingOutcome& outcome,
                               const ObservedBalancingRecord& record);

}  // namespace zonalsim
