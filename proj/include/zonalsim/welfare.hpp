#pragma once

#include <utility>
#include <vector>

#include "zonalsim/settlement.hpp"

namespace zonalsim {

inline constexpr double kGasEmissionFactor = 0.175;  // t CO2 per MWh displaced

// Operational quantities of one design on one day, GBP unless noted.
struct DesignWelfare {
    double export_value = 0.0;            // exports at the local GB price
    double import_cost = 0.0;             // imports at the neighbour price
    double ic_rent = 0.0;                 // full interconnector rent
    double thermal_wholesale_cost = 0.0;  // srmc x scheduled energy
    double thermal_balancing_cost = 0.0;  // (srmc + m) x up - srmc x down

    DesignWelfare& operator+=(const DesignWelfare& o);
};

DesignWelfare design_welfare(const DesignOutcome& d, const DayScenario& s,
                             const NetworkTopology& topo, double markup);

// Positive values are benefits of the zonal design.
struct SebComponents {
    double export_revenue_delta = 0.0;
    double import_cost_delta = 0.0;
    double ic_rent_delta = 0.0;  // GB half
    double prevented_thermal_balancing = 0.0;
    double prevented_thermal_wholesale = 0.0;
    double total_top_down = 0.0;

    double total_bottom_up() const {
        return export_revenue_delta + import_cost_delta + ic_rent_delta +
               prevented_thermal_balancing + prevented_thermal_wholesale;
    }
    SebComponents& operator+=(const SebComponents& o);
};

SebComponents seb_bottom_up(const DesignWelfare& national, const DesignWelfare& zonal);

// consumer_saving: national minus zonal consumer cost; surplus_delta: zonal
// minus national producer surplus; ic_rent_gain_gb: GB share of the rent change.
double seb_top_down(double consumer_saving, double surplus_delta, double ic_rent_gain_gb);

struct Regression {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double projected_annual = 0.0;  // GBP per year at scaled curtailment
};

// pairs: (monthly curtailment MWh, monthly SEB GBP).
Regression curtailment_regression(const std::vector<std::pair<double, double>>& pairs,
                                  double scale);

struct UnlockedWind {
    double energy_mwh = 0.0;
    double co2_tonnes = 0.0;
};

UnlockedWind unlocked_wind(const ClearingResult& national_actual, const ClearingResult& zonal_actual,
                           const DayScenario& s, double factor = kGasEmissionFactor);

// Wind scheduled by the market but not delivered after redispatch, MWh.
double redispatch_curtailment(const DesignOutcome& d, const DayScenario& s);
// Wind available but not scheduled by the market, MWh.
double market_curtailment(const DesignOutcome& d, const DayScenario& s);

}  // namespace zonalsim
