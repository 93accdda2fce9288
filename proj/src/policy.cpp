#include "zonalsim/policy.hpp"

#include <algorithm>

namespace zonalsim {

std::vector<std::string> price_depressed_zones(const PolicyRunData& d) {
    std::vector<std::string> out;
    for (const auto& [zone, mean] : d.zone_mean_price)
        if (mean < d.national_mean_price) out.push_back(zone);
    return out;
}

std::vector<const PolicyUnitData*> covered_units(const PolicyRunData& d, bool exclude_cfd) {
    const auto zones = price_depressed_zones(d);
    std::vector<const PolicyUnitData*> out;
    for (const auto& u : d.units) {
        if (!is_renewable_tech(u.tech)) continue;
        if (exclude_cfd && u.cfd) continue;
        if (std::find(zones.begin(), zones.end(), u.zone) == zones.end()) continue;
        out.push_back(&u);
    }
    return out;
}

double reference_price(const std::vector<double>& zone_prices, const std::vector<double>& zone_loads) {
    double num = 0.0, den = 0.0;
    for (std::size_t z = 0; z < zone_prices.size(); ++z) {
        num += zone_prices[z] * zone_loads[z];
        den += zone_loads[z];
    }
    if (den <= 0.0) {
        double sum = 0.0;
        for (double p : zone_prices) sum += p;
        return zone_prices.empty() ? 0.0 : sum / static_cast<double>(zone_prices.size());
    }
    return num / den;
}

double ftr_spread_payout(const Series& q, const Series& p_ref, const Series& p_zone) {
    double pay = 0.0;
    for (std::size_t t = 0; t < q.size(); ++t) pay += q[t] * (p_ref[t] - p_zone[t]) * kPeriodHours;
    return pay;
}

namespace {

PolicyUnitOutcome base_outcome(const PolicyUnitData& u) {
    PolicyUnitOutcome o;
    o.unit = u.unit;
    o.zone = u.zone;
    o.national_revenue = u.national_revenue;
    o.zonal_revenue = u.zonal_revenue;
    o.post_revenue = u.zonal_revenue;
    return o;
}

void finish(PolicyOutcome& p, const PolicyRunData& d) {
    for (auto& u : p.units) {
        u.post_revenue = u.zonal_revenue + u.payout;
        if (u.national_revenue > 0.0)
            u.restoration = std::max(0.0, u.post_revenue / u.national_revenue);
        p.payout_total += u.payout;
    }
    if (d.served_load_mwh > 0.0) p.residual_saving_per_mwh = p.residual_saving / d.served_load_mwh;
}

}  // namespace

PolicyOutcome policy1(const PolicyRunData& d) {
    PolicyOutcome p;
    p.policy = 1;
    p.rent_share = 0.0;
    p.rent_available = d.rent_available;
    for (const auto* u : covered_units(d, false)) p.units.push_back(base_outcome(*u));
    // Grandfathered CfD top-ups against the zonal price are already part of
    // the zonal settlement; all rent flows back to consumers.
    p.residual_saving = d.consumer_saving_full;
    finish(p, d);
    return p;
}

PolicyOutcome policy2(const PolicyRunData& d, double rent_share) {
    PolicyOutcome p;
    p.policy = 2;
    p.rent_share = rent_share;
    p.rent_available = d.rent_available;
    p.rent_budget = rent_share * d.rent_available;
    const auto covered = covered_units(d, true);
    double raw = 0.0;
    for (const auto* u : covered) raw += u->ftr_spread_payout;
    if (p.rent_budget < 0.0) {
        p.scale = 0.0;
        ++p.warnings;
    } else if (raw > p.rent_budget) {
        p.scale = p.rent_budget / raw;
    }
    for (const auto* u : covered) {
        auto o = base_outcome(*u);
        o.payout = p.scale * u->ftr_spread_payout;
        p.units.push_back(o);
    }
    p.residual_saving = d.consumer_saving_full - p.rent_budget;
    finish(p, d);
    return p;
}

PolicyOutcome policy3(const PolicyRunData& d, double rent_share) {
    PolicyOutcome p;
    p.policy = 3;
    p.rent_share = rent_share;
    p.rent_available = d.rent_available;
    p.rent_budget = rent_share * d.rent_available;
    const auto covered = covered_units(d, false);
    double national = 0.0, zonal = 0.0;
    for (const auto* u : covered) {
        national += u->national_revenue;
        zonal += u->zonal_revenue;
    }
    for (const auto* u : covered) p.units.push_back(base_outcome(*u));
    p.residual_saving = d.consumer_saving_full - p.rent_budget;
    if (national > 0.0) {
        const double rho = std::clamp((zonal + p.rent_budget) / national, 0.0, 1.0);
        p.rho = rho;
        for (auto& o : p.units) o.payout = rho * o.national_revenue - o.zonal_revenue;
    }
    finish(p, d);
    if (p.rho)
        for (auto& o : p.units)
            if (o.national_revenue > 0.0) o.restoration = *p.rho;
    return p;
}

}  // namespace zonalsim
