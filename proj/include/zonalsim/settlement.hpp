#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonalsim/clearing.hpp"
#include "zonalsim/redispatch.hpp"

namespace zonalsim {

struct SettlementConfig {
    double markup = 30.0;          // balancing premium m, GBP/MWh
    int cfd_suspend_from = 13;     // position within a negative-price run
};

// Everything one design produces for one day.
struct DesignOutcome {
    ClearingResult wholesale;
    ClearingResult actual;  // transmission-compliant redispatch
    BalancingOutcome balancing;
    BalancingPrice balancing_price;
    CongestionRent rent;
};

struct SettlementLedger {
    Design design = Design::National;
    int periods = kPeriodsPerDay;
    // Per unit, per period, GBP.
    std::map<std::string, Series> wholesale_revenue, balancing_revenue, ro_payment, cfd_topup;
    // Per period, GBP (load in MWh).
    Series consumer_wholesale_cost, bm_cost, congestion_rent_intra, congestion_rent_ic;
    Series ic_trade;  // GB-side payments to interconnectors at the local price
    Series served_load;
};

SettlementLedger settle(const DesignOutcome& d, const DayScenario& s, const NetworkTopology& topo,
                        const SettlementConfig& cfg = {});

struct ConsumerCostStack {
    double wholesale_cost = 0.0;
    double bm_cost = 0.0;
    double ro_payments = 0.0;
    double cfd_payments = 0.0;
    double congestion_rent_income = 0.0;
    double served_load_mwh = 0.0;

    double total() const {
        return wholesale_cost + bm_cost + ro_payments + cfd_payments - congestion_rent_income;
    }
    std::optional<double> per_mwh() const {
        if (served_load_mwh <= 0.0) return std::nullopt;
        return total() / served_load_mwh;
    }
    ConsumerCostStack& operator+=(const ConsumerCostStack& o);
};

ConsumerCostStack consumer_costs(const SettlementLedger& ledger);
ConsumerCostStack consumer_costs_period(const SettlementLedger& ledger, int t);

// CfD top-up per period for one unit; suspended from the configured position
// of every run of negative reference prices.
Series cfd_topup(double strike, const Series& reference_price, const Series& mw,
                 const SettlementConfig& cfg = {});

struct UnitSurplus {
    double wholesale = 0.0;
    double balancing = 0.0;
    double subsidy = 0.0;
    double revenue = 0.0;           // wholesale revenue + subsidies
    double balancing_revenue = 0.0;
    double energy_mwh = 0.0;        // actual output

    double total() const { return wholesale + balancing + subsidy; }
    UnitSurplus& operator+=(const UnitSurplus& o);
};

// One unit's surplus for one settled day.
UnitSurplus unit_surplus(const Unit& u, const SettlementLedger& ledger, const DesignOutcome& d,
                         const DayScenario& s, double markup);

struct ProducerSurplus {
    std::string unit;
    UnitSurplus national;
    UnitSurplus zonal;
    std::optional<double> percent_change;  // undefined below 1 milli-pound national total
    double markup = 30.0;
};

ProducerSurplus producer_surplus(const std::string& unit, const UnitSurplus& national,
                                 const UnitSurplus& zonal, double markup);

// Population standard deviation.
double price_volatility(const std::vector<double>& prices);

}  // namespace zonalsim
