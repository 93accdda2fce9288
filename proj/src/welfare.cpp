#include "zonalsim/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zonalsim {

DesignWelfare& DesignWelfare::operator+=(const DesignWelfare& o) {
    export_value += o.export_value;
    import_cost += o.import_cost;
    ic_rent += o.ic_rent;
    thermal_wholesale_cost += o.thermal_wholesale_cost;
    thermal_balancing_cost += o.thermal_balancing_cost;
    return *this;
}

SebComponents& SebComponents::operator+=(const SebComponents& o) {
    export_revenue_delta += o.export_revenue_delta;
    import_cost_delta += o.import_cost_delta;
    ic_rent_delta += o.ic_rent_delta;
    prevented_thermal_balancing += o.prevented_thermal_balancing;
    prevented_thermal_wholesale += o.prevented_thermal_wholesale;
    total_top_down += o.total_top_down;
    return *this;
}

DesignWelfare design_welfare(const DesignOutcome& d, const DayScenario& s,
                             const NetworkTopology& topo, double markup) {
    DesignWelfare w;
    const auto& wh = d.wholesale;
    const auto Tn = static_cast<std::size_t>(wh.periods);
    std::map<std::string, std::size_t> bus_idx;
    for (std::size_t b = 0; b < topo.buses.size(); ++b) bus_idx[topo.buses[b]] = b;
    for (const auto& u : *s.units) {
        if (u.kind == UnitKind::Interconnector) {
            const auto b = bus_idx.at(u.bus);
            const auto& imp = wh.ic_import.at(u.id);
            const auto& exp = wh.ic_export.at(u.id);
            const auto& pi = s.neighbor_price.at(u.id);
            for (std::size_t t = 0; t < Tn; ++t) {
                const double p = wh.price_at_bus(b, static_cast<int>(t));
                w.export_value += exp[t] * p * kPeriodHours;
                w.import_cost += imp[t] * ic_import_cost(pi[t], u.efficiency) * kPeriodHours;
            }
        } else if (u.kind == UnitKind::Thermal) {
            const auto& c = s.marginal_costs.at(u.id).corrected_srmc;
            const auto& q = wh.dispatch.at(u.id);
            const auto& up = d.balancing.unit_up.at(u.id);
            const auto& down = d.balancing.unit_down.at(u.id);
            for (std::size_t t = 0; t < Tn; ++t) {
                w.thermal_wholesale_cost += c[t] * q[t] * kPeriodHours;
                w.thermal_balancing_cost += (c[t] + markup) * up[t] - c[t] * down[t];
            }
        }
    }
    for (double r : d.rent.ic) w.ic_rent += r;
    return w;
}

SebComponents seb_bottom_up(const DesignWelfare& n, const DesignWelfare& z) {
    SebComponents c;
    c.export_revenue_delta = z.export_value - n.export_value;
    c.import_cost_delta = -(z.import_cost - n.import_cost);
    c.ic_rent_delta = 0.5 * (z.ic_rent - n.ic_rent);
    c.prevented_thermal_balancing = n.thermal_balancing_cost - z.thermal_balancing_cost;
    c.prevented_thermal_wholesale = n.thermal_wholesale_cost - z.thermal_wholesale_cost;
    return c;
}

double seb_top_down(double consumer_saving, double surplus_delta, double ic_rent_gain_gb) {
    return consumer_saving + surplus_delta + ic_rent_gain_gb;
}

Regression curtailment_regression(const std::vector<std::pair<double, double>>& pairs,
                                  double scale) {
    if (pairs.size() < 3) throw std::invalid_argument("regression needs at least 3 months");
    const double n = static_cast<double>(pairs.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pairs) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pairs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 1e-12 * std::max(1.0, mx * mx))
        throw std::invalid_argument("regression: curtailment has no variance");
    Regression r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    r.projected_annual = 12.0 * (r.intercept + r.slope * scale * mx);
    return r;
}

UnlockedWind unlocked_wind(const ClearingResult& national_actual, const ClearingResult& zonal_actual,
                           const DayScenario& s, double factor) {
    double delta = 0.0;
    for (const auto& u : *s.units) {
        if (u.tech != Tech::Wind || !u.is_generator()) continue;
        const auto& n = national_actual.dispatch.at(u.id);
        const auto& z = zonal_actual.dispatch.at(u.id);
        for (std::size_t t = 0; t < n.size(); ++t) delta += (z[t] - n[t]) * kPeriodHours;
    }
    UnlockedWind w;
    w.energy_mwh = delta > 1e-6 ? delta : 0.0;  // below solver resolution counts as none
    w.co2_tonnes = w.energy_mwh * factor;
    return w;
}

double redispatch_curtailment(const DesignOutcome& d, const DayScenario& s) {
    double total = 0.0;
    for (const auto& u : *s.units) {
        if (u.tech != Tech::Wind || !u.is_generator()) continue;
        const auto& w = d.wholesale.dispatch.at(u.id);
        const auto& a = d.actual.dispatch.at(u.id);
        for (std::size_t t = 0; t < w.size(); ++t)
            total += std::max(0.0, w[t] - a[t]) * kPeriodHours;
    }
    return total;
}

double market_curtailment(const DesignOutcome& d, const DayScenario& s) {
    double total = 0.0;
    for (const auto& u : *s.units) {
        if (u.tech != Tech::Wind || !u.is_generator()) continue;
        const auto& w = d.wholesale.dispatch.at(u.id);
        const auto& avail = s.availability.at(u.id);
        for (std::size_t t = 0; t < w.size(); ++t)
            total += std::max(0.0, avail[t] - w[t]) * kPeriodHours;
    }
    return total;
}

}  // namespace zonalsim
