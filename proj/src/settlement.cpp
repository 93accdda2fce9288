#include "zonalsim/settlement.hpp"

#include <cmath>
#include <stdexcept>

namespace zonalsim {

ConsumerCostStack& ConsumerCostStack::operator+=(const ConsumerCostStack& o) {
    wholesale_cost += o.wholesale_cost;
    bm_cost += o.bm_cost;
    ro_payments += o.ro_payments;
    cfd_payments += o.cfd_payments;
    congestion_rent_income += o.congestion_rent_income;
    served_load_mwh += o.served_load_mwh;
    return *this;
}

UnitSurplus& UnitSurplus::operator+=(const UnitSurplus& o) {
    wholesale += o.wholesale;
    balancing += o.balancing;
    subsidy += o.subsidy;
    revenue += o.revenue;
    balancing_revenue += o.balancing_revenue;
    energy_mwh += o.energy_mwh;
    return *this;
}

Series cfd_topup(double strike, const Series& reference_price, const Series& mw,
                 const SettlementConfig& cfg) {
    Series out(mw.size(), 0.0);
    int run = 0;
    for (std::size_t t = 0; t < mw.size(); ++t) {
        run = reference_price[t] < 0.0 ? run + 1 : 0;
        if (run >= cfg.cfd_suspend_from) continue;
        out[t] = (strike - reference_price[t]) * mw[t] * kPeriodHours;
    }
    return out;
}

SettlementLedger settle(const DesignOutcome& d, const DayScenario& s, const NetworkTopology& topo,
                        const SettlementConfig& cfg) {
    const auto& w = d.wholesale;
    const int T = w.periods;
    const auto Tn = static_cast<std::size_t>(T);
    SettlementLedger L;
    L.design = w.design;
    L.periods = T;
    L.consumer_wholesale_cost.assign(Tn, 0.0);
    L.ic_trade.assign(Tn, 0.0);
    L.served_load.assign(Tn, 0.0);
    L.bm_cost = d.balancing_price.period_cost;
    if (L.bm_cost.size() != Tn) L.bm_cost.assign(Tn, 0.0);
    L.congestion_rent_intra = d.rent.intra;
    L.congestion_rent_ic = d.rent.ic;

    std::map<std::string, std::size_t> bus_idx;
    for (std::size_t b = 0; b < topo.buses.size(); ++b) bus_idx[topo.buses[b]] = b;
    auto local_prices = [&](const std::string& bus) {
        Series p(Tn);
        const auto b = bus_idx.at(bus);
        for (int t = 0; t < T; ++t) p[static_cast<std::size_t>(t)] = w.price_at_bus(b, t);
        return p;
    };

    for (const auto& [bus, load] : s.load) {
        const auto p = local_prices(bus);
        for (std::size_t t = 0; t < Tn; ++t) {
            L.consumer_wholesale_cost[t] += load[t] * p[t] * kPeriodHours;
            L.served_load[t] += load[t] * kPeriodHours;
        }
    }

    for (const auto& u : *s.units) {
        const auto p = local_prices(u.bus);
        const auto& q = w.dispatch.at(u.id);
        if (u.kind == UnitKind::Interconnector) {
            for (std::size_t t = 0; t < Tn; ++t) L.ic_trade[t] += p[t] * q[t] * kPeriodHours;
            continue;
        }
        Series rev(Tn), bal(Tn, 0.0), ro(Tn, 0.0), cfd(Tn, 0.0);
        for (std::size_t t = 0; t < Tn; ++t) rev[t] = p[t] * q[t] * kPeriodHours;
        auto br = d.balancing_price.unit_period_revenue.find(u.id);
        if (br != d.balancing_price.unit_period_revenue.end()) bal = br->second;
        if (u.subsidy.variant == SubsidyScheme::Variant::RO) {
            if (!u.subsidy.value) throw std::runtime_error("unit " + u.id + " has no ROC value");
            const auto& a = d.actual.dispatch.at(u.id);
            for (std::size_t t = 0; t < Tn; ++t) ro[t] = *u.subsidy.value * a[t] * kPeriodHours;
        } else if (u.subsidy.variant == SubsidyScheme::Variant::CfD) {
            if (!u.subsidy.value) throw std::runtime_error("CfD unit " + u.id + " has no strike");
            cfd = cfd_topup(*u.subsidy.value, p, q, cfg);
        }
        L.wholesale_revenue[u.id] = std::move(rev);
        L.balancing_revenue[u.id] = std::move(bal);
        L.ro_payment[u.id] = std::move(ro);
        L.cfd_topup[u.id] = std::move(cfd);
    }
    return L;
}

ConsumerCostStack consumer_costs_period(const SettlementLedger& L, int t) {
    const auto ti = static_cast<std::size_t>(t);
    ConsumerCostStack c;
    c.wholesale_cost = L.consumer_wholesale_cost[ti];
    c.bm_cost = L.bm_cost[ti];
    for (const auto& [u, s] : L.ro_payment) c.ro_payments += s[ti];
    for (const auto& [u, s] : L.cfd_topup) c.cfd_payments += s[ti];
    c.congestion_rent_income = L.congestion_rent_intra[ti];
    c.served_load_mwh = L.served_load[ti];
    return c;
}

ConsumerCostStack consumer_costs(const SettlementLedger& L) {
    ConsumerCostStack c;
    for (int t = 0; t < L.periods; ++t) c += consumer_costs_period(L, t);
    return c;
}

UnitSurplus unit_surplus(const Unit& u, const SettlementLedger& L, const DesignOutcome& d,
                         const DayScenario& s, double markup) {
    UnitSurplus out;
    if (u.kind == UnitKind::Interconnector) return out;
    const auto Tn = static_cast<std::size_t>(L.periods);
    const auto& rev = L.wholesale_revenue.at(u.id);
    const auto& bal = L.balancing_revenue.at(u.id);
    const auto& ro = L.ro_payment.at(u.id);
    const auto& cfd = L.cfd_topup.at(u.id);
    const auto& q = d.wholesale.dispatch.at(u.id);
    const auto& a = d.actual.dispatch.at(u.id);
    const bool thermal = u.kind == UnitKind::Thermal;
    const Series* srmc = thermal ? &s.marginal_costs.at(u.id).corrected_srmc : nullptr;
    const Series* up = nullptr;
    const Series* down = nullptr;
    if (auto it = d.balancing.unit_up.find(u.id); it != d.balancing.unit_up.end()) up = &it->second;
    if (auto it = d.balancing.unit_down.find(u.id); it != d.balancing.unit_down.end()) down = &it->second;

    for (std::size_t t = 0; t < Tn; ++t) {
        out.revenue += rev[t] + ro[t] + cfd[t];
        out.balancing_revenue += bal[t];
        out.subsidy += ro[t] + cfd[t];
        out.energy_mwh += a[t] * kPeriodHours;
        if (thermal) {
            const double c = (*srmc)[t];
            out.wholesale += rev[t] - c * q[t] * kPeriodHours;
            const double u_mwh = up ? (*up)[t] : 0.0;
            const double d_mwh = down ? (*down)[t] : 0.0;
            out.balancing += bal[t] - (c + markup) * u_mwh + c * d_mwh;
        } else {
            out.wholesale += rev[t];
            out.balancing += bal[t];
        }
    }
    return out;
}

ProducerSurplus producer_surplus(const std::string& unit, const UnitSurplus& national,
                                 const UnitSurplus& zonal, double markup) {
    ProducerSurplus p;
    p.unit = unit;
    p.national = national;
    p.zonal = zonal;
    p.markup = markup;
    const double base = national.total();
    if (std::abs(base) >= 1e-3) p.percent_change = 100.0 * (zonal.total() - base) / std::abs(base);
    return p;
}

double price_volatility(const std::vector<double>& prices) {
    if (prices.size() < 2) throw std::invalid_argument("price volatility needs >= 2 observations");
    double mean = 0.0;
    for (double p : prices) mean += p;
    mean /= static_cast<double>(prices.size());
    double var = 0.0;
    for (double p : prices) var += (p - mean) * (p - mean);
    return std::sqrt(var / static_cast<double>(prices.size()));
}

}  // namespace zonalsim
