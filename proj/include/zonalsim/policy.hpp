#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zonalsim/scenario.hpp"

namespace zonalsim {

// Run-level inputs for one unit. Revenues are wholesale revenue plus
// subsidies; balancing receipts are excluded in both designs.
struct PolicyUnitData {
    std::string unit;
    std::string zone;
    Tech tech = Tech::Wind;
    bool cfd = false;
    double national_revenue = 0.0;
    double zonal_revenue = 0.0;
    double ftr_spread_payout = 0.0;  // sum of q_zonal * (P_ref - P_zone) * dt, unscaled
};

struct PolicyRunData {
    std::map<std::string, double> zone_mean_price;  // time average over the run
    double national_mean_price = 0.0;
    double rent_available = 0.0;       // intra-GB rent collected in the zonal design
    double consumer_saving_full = 0.0; // national minus zonal consumer cost, rent to consumers
    double served_load_mwh = 0.0;
    std::vector<PolicyUnitData> units;
};

struct PolicyUnitOutcome {
    std::string unit;
    std::string zone;
    double national_revenue = 0.0;
    double zonal_revenue = 0.0;
    double payout = 0.0;
    double post_revenue = 0.0;
    std::optional<double> restoration;  // post / national, undefined for national <= 0
};

struct PolicyOutcome {
    int policy = 0;
    double rent_share = 1.0;
    std::vector<PolicyUnitOutcome> units;
    double rent_available = 0.0;
    double rent_budget = 0.0;   // share committed to the policy
    double payout_total = 0.0;
    double scale = 1.0;         // policy 2 common factor
    std::optional<double> rho;  // policy 3 common ratio
    double residual_saving = 0.0;
    std::optional<double> residual_saving_per_mwh;
    int warnings = 0;
};

// Zones whose mean zonal price is below the national mean.
std::vector<std::string> price_depressed_zones(const PolicyRunData& d);

// Wind, solar and hydro units in price-depressed zones.
std::vector<const PolicyUnitData*> covered_units(const PolicyRunData& d, bool exclude_cfd);

PolicyOutcome policy1(const PolicyRunData& d);
PolicyOutcome policy2(const PolicyRunData& d, double rent_share = 1.0);
PolicyOutcome policy3(const PolicyRunData& d, double rent_share = 1.0);

// Load-weighted reference price across zones for one period.
double reference_price(const std::vector<double>& zone_prices, const std::vector<double>& zone_loads);

// Production-based spread payout sum_t q_t (P_ref,t - P_zone,t) dt, GBP.
double ftr_spread_payout(const Series& q, const Series& p_ref, const Series& p_zone);

}  // namespace zonalsim
