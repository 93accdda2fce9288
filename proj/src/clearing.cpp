#include "zonalsim/clearing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zonalsim/cost_model.hpp"
#include "zonalsim/lp.hpp"

namespace zonalsim {

double ic_import_cost(double neighbor_price, double efficiency) {
    return std::max(neighbor_price / efficiency, neighbor_price * efficiency);
}

double ic_export_revenue(double neighbor_price, double efficiency) {
    return std::min(neighbor_price * efficiency, neighbor_price / efficiency);
}

std::map<std::string, double> tie_breaks(const UnitRegistry& units, double magnitude) {
    std::vector<std::string> ids;
    for (const auto& u : units)
        if (u.is_generator()) ids.push_back(u.id);
    std::sort(ids.begin(), ids.end());
    std::map<std::string, double> out;
    const double n = static_cast<double>(ids.size()) + 1.0;
    for (std::size_t i = 0; i < ids.size(); ++i)
        out[ids[i]] = magnitude * (static_cast<double>(i) + 1.0) / n;
    return out;
}

namespace {

struct Columns {
    std::vector<int> p;            // generators, per period
    std::vector<int> ch, dis, soc; // storage
    std::vector<int> imp, exp;     // interconnectors
};

}  // namespace

ClearingResult clear(const DayScenario& s, const NetworkTopology& topo, Design design,
                     double tau, const ClearingOptions& opt) {
    if (!(tau > 0.0)) throw std::invalid_argument("tuning factor must be positive");
    if (!s.units) throw std::invalid_argument("scenario has no units");
    const int T = s.periods;
    const auto Tn = static_cast<std::size_t>(T);

    ClearingResult res;
    res.design = design;
    res.tau = tau;
    res.periods = T;
    res.regions = make_regions(topo, design);
    const int R = static_cast<int>(res.regions.names.size());

    std::map<std::string, std::size_t> bus_idx;
    for (std::size_t b = 0; b < topo.buses.size(); ++b) bus_idx[topo.buses[b]] = b;
    auto region_of = [&](const std::string& bus) {
        return res.regions.bus_region[bus_idx.at(bus)];
    };

    LinearProgram lp;
    const int g_balance = lp.add_group("power-balance");
    const int g_soc = lp.add_group("storage-soc");
    const int g_quota = lp.add_group("daily-quota");
    const int g_ramp = lp.add_group("ic-ramp");

    // Balance rows first: row index = r * T + t.
    for (int r = 0; r < R; ++r)
        for (int t = 0; t < T; ++t) lp.add_row(0.0, 0.0, g_balance);
    std::vector<double> load_rhs(static_cast<std::size_t>(R) * Tn, 0.0);
    for (const auto& [bus, series] : s.load) {
        const int r = region_of(bus);
        for (int t = 0; t < T; ++t)
            load_rhs[static_cast<std::size_t>(r * T + t)] += series.at(static_cast<std::size_t>(t));
    }

    const auto ties = tie_breaks(*s.units, opt.tie_perturbation);
    const double eps = 0.5 * opt.tie_perturbation;
    std::map<std::string, Columns> cols;

    for (const auto& u : *s.units) {
        const int r = region_of(u.bus);
        Columns c;
        if (u.is_generator()) {
            const auto& avail = s.availability.at(u.id);
            double energy_ub = 0.0;
            for (int t = 0; t < T; ++t) {
                double ub = avail.at(static_cast<std::size_t>(t));
                if (u.kind == UnitKind::DailyQuota) ub = std::min(ub, u.power_cap_mw);
                energy_ub += ub * kPeriodHours;
                const int col = lp.add_column(unit_bid(s, u.id, t) + ties.at(u.id), 0.0, ub);
                lp.add_coefficient(r * T + t, col, 1.0);
                c.p.push_back(col);
            }
            if (u.kind == UnitKind::DailyQuota) {
                const double e = std::min(u.daily_quota_mwh, energy_ub);
                const int row = lp.add_row(e, e, g_quota);
                for (int col : c.p) lp.add_coefficient(row, col, kPeriodHours);
            }
        } else if (u.kind == UnitKind::Storage) {
            const double pcap = u.effective_power_cap();
            const double ecap = u.effective_energy_cap();
            const double s0 = opt.storage_initial_share * ecap;
            for (int t = 0; t < T; ++t) {
                const int ch = lp.add_column(eps, 0.0, pcap);
                const int dis = lp.add_column(eps, 0.0, pcap);
                const double lo = t == T - 1 ? s0 : 0.0;
                const double hi = t == T - 1 ? s0 : ecap;
                const int soc = lp.add_column(0.0, lo, hi);
                lp.add_coefficient(r * T + t, dis, 1.0);
                lp.add_coefficient(r * T + t, ch, -1.0);
                // soc_t - soc_{t-1} - ch*dt + dis*dt = 0, soc_{-1} = s0
                const double rhs = t == 0 ? s0 : 0.0;
                const int row = lp.add_row(rhs, rhs, g_soc);
                lp.add_coefficient(row, soc, 1.0);
                if (t > 0) lp.add_coefficient(row, c.soc.back(), -1.0);
                lp.add_coefficient(row, ch, -kPeriodHours);
                lp.add_coefficient(row, dis, kPeriodHours);
                c.ch.push_back(ch);
                c.dis.push_back(dis);
                c.soc.push_back(soc);
            }
        } else if (u.kind == UnitKind::Interconnector) {
            const auto& pi = s.neighbor_price.at(u.id);
            for (int t = 0; t < T; ++t) {
                const double price = pi.at(static_cast<std::size_t>(t));
                const int imp = lp.add_column(ic_import_cost(price, u.efficiency) + eps, 0.0,
                                              u.import_cap_mw);
                const int exp = lp.add_column(-ic_export_revenue(price, u.efficiency) + eps, 0.0,
                                              u.export_cap_mw);
                lp.add_coefficient(r * T + t, imp, 1.0);
                lp.add_coefficient(r * T + t, exp, -1.0);
                if (t > 0 && u.ramp_mw > 0.0) {
                    const int row = lp.add_row(-u.ramp_mw, u.ramp_mw, g_ramp);
                    lp.add_coefficient(row, imp, 1.0);
                    lp.add_coefficient(row, exp, -1.0);
                    lp.add_coefficient(row, c.imp.back(), -1.0);
                    lp.add_coefficient(row, c.exp.back(), 1.0);
                }
                c.imp.push_back(imp);
                c.exp.push_back(exp);
            }
        }
        cols.emplace(u.id, std::move(c));
    }

    const auto links = active_links(topo, s, res.regions, tau);
    std::vector<std::vector<int>> flow_cols;
    for (const auto& a : links) {
        std::vector<int> fc;
        for (int t = 0; t < T; ++t) {
            const double cap = a.unconstrained ? kInf : a.cap[static_cast<std::size_t>(t)];
            const int col = lp.add_column(0.0, -cap, cap);
            lp.add_coefficient(a.from_region * T + t, col, -1.0);
            lp.add_coefficient(a.to_region * T + t, col, 1.0);
            fc.push_back(col);
        }
        flow_cols.push_back(std::move(fc));
    }

    for (std::size_t k = 0; k < load_rhs.size(); ++k)
        lp.set_row_bounds(static_cast<int>(k), load_rhs[k], load_rhs[k]);

    LpSolver solver(lp);
    const LpSolution sol = solver.solve();
    auto value = [&](int col) { return sol.x[static_cast<std::size_t>(col)]; };

    res.prices.assign(static_cast<std::size_t>(R), Series(Tn, 0.0));
    for (int r = 0; r < R; ++r)
        for (int t = 0; t < T; ++t)
            res.prices[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] =
                sol.row_dual[static_cast<std::size_t>(r * T + t)];

    double objective = 0.0;
    for (const auto& u : *s.units) {
        const auto& c = cols.at(u.id);
        Series net(Tn, 0.0);
        if (u.is_generator()) {
            for (int t = 0; t < T; ++t) {
                const auto ti = static_cast<std::size_t>(t);
                net[ti] = value(c.p[ti]);
                objective += unit_bid(s, u.id, t) * net[ti] * kPeriodHours;
            }
        } else if (u.kind == UnitKind::Storage) {
            Series ch(Tn), dis(Tn), soc(Tn);
            for (std::size_t t = 0; t < Tn; ++t) {
                ch[t] = value(c.ch[t]);
                dis[t] = value(c.dis[t]);
                soc[t] = value(c.soc[t]);
                net[t] = dis[t] - ch[t];
            }
            res.charge[u.id] = std::move(ch);
            res.discharge[u.id] = std::move(dis);
            res.soc[u.id] = std::move(soc);
        } else if (u.kind == UnitKind::Interconnector) {
            const auto& pi = s.neighbor_price.at(u.id);
            Series imp(Tn), exp(Tn);
            for (std::size_t t = 0; t < Tn; ++t) {
                imp[t] = value(c.imp[t]);
                exp[t] = value(c.exp[t]);
                net[t] = imp[t] - exp[t];
                objective += (imp[t] * ic_import_cost(pi[t], u.efficiency) -
                              exp[t] * ic_export_revenue(pi[t], u.efficiency)) *
                             kPeriodHours;
            }
            res.ic_import[u.id] = std::move(imp);
            res.ic_export[u.id] = std::move(exp);
        }
        res.dispatch[u.id] = std::move(net);
    }
    res.objective = objective;

    for (std::size_t k = 0; k < links.size(); ++k) {
        Series f(Tn);
        for (std::size_t t = 0; t < Tn; ++t) f[t] = value(flow_cols[k][t]);
        res.flows[links[k].link] = std::move(f);
    }
    return res;
}

CongestionRent congestion_rent(const ClearingResult& r, const DayScenario& s,
                               const NetworkTopology& topo) {
    const auto Tn = static_cast<std::size_t>(r.periods);
    CongestionRent out{Series(Tn, 0.0), Series(Tn, 0.0)};
    std::map<std::string, std::size_t> bus_idx;
    for (std::size_t b = 0; b < topo.buses.size(); ++b) bus_idx[topo.buses[b]] = b;
    for (const auto& [l, flow] : r.flows) {
        const auto from = bus_idx.at(topo.links[l].from);
        const auto to = bus_idx.at(topo.links[l].to);
        for (std::size_t t = 0; t < Tn; ++t) {
            const int ti = static_cast<int>(t);
            out.intra[t] += flow[t] * (r.price_at_bus(to, ti) - r.price_at_bus(from, ti)) * kPeriodHours;
        }
    }
    for (const auto& u : *s.units) {
        if (u.kind != UnitKind::Interconnector) continue;
        const auto bus = bus_idx.at(u.bus);
        const auto& imp = r.ic_import.at(u.id);
        const auto& exp = r.ic_export.at(u.id);
        const auto& pi = s.neighbor_price.at(u.id);
        for (std::size_t t = 0; t < Tn; ++t) {
            const double p = r.price_at_bus(bus, static_cast<int>(t));
            out.ic[t] += (imp[t] * (p - ic_import_cost(pi[t], u.efficiency)) +
                          exp[t] * (ic_export_revenue(pi[t], u.efficiency) - p)) *
                         kPeriodHours;
        }
    }
    return out;
}

const char* to_string(WindCase c) {
    switch (c) {
        case WindCase::Low: return "low-wind";
        case WindCase::High: return "high-wind";
        case WindCase::Extreme: return "extreme-wind";
    }
    return "?";
}

PriceSetter national_price_setter(const ClearingResult& national, const DayScenario& s, int t) {
    const double price = national.prices.at(0).at(static_cast<std::size_t>(t));
    PriceSetter best;
    bool best_partial = false;
    for (const auto& u : *s.units) {
        if (!u.is_generator()) continue;
        const double bid = unit_bid(s, u.id, t);
        if (std::abs(bid - price) > 1e-4) continue;
        const double p = national.dispatch.at(u.id).at(static_cast<std::size_t>(t));
        double ub = s.availability.at(u.id).at(static_cast<std::size_t>(t));
        if (u.kind == UnitKind::DailyQuota) ub = std::min(ub, u.power_cap_mw);
        const bool partial = p > 1e-6 && p < ub - 1e-6;
        if (best.unit.empty() || (partial && !best_partial)) {
            best = PriceSetter{u.id, u.tech, bid};
            best_partial = partial;
        }
    }
    return best;
}

WindCase classify_period(const std::vector<double>& zonal_prices, const PriceSetter& setter) {
    if (zonal_prices.empty()) return WindCase::Low;
    const auto [lo, hi] = std::minmax_element(zonal_prices.begin(), zonal_prices.end());
    if (*hi - *lo <= kSplitEpsilon) return WindCase::Low;
    if (!setter.unit.empty() && is_renewable_tech(setter.tech) && setter.bid <= 0.0)
        return WindCase::Extreme;
    return WindCase::High;
}

}  // namespace zonalsim
