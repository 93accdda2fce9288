#include "zonalsim/redispatch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zonalsim/cost_model.hpp"
#include "zonalsim/lp.hpp"

namespace zonalsim {

struct RedispatchModel::Impl {
    const ClearingResult* wholesale = nullptr;
    const DayScenario* s = nullptr;
    const NetworkTopology* topo = nullptr;
    RegionMap regions;
    std::vector<ActiveLink> links;
    std::vector<std::vector<int>> flow_cols;
    std::map<std::string, std::vector<int>> up, dn;
    std::map<std::string, Series> base;  // wholesale generator schedule
    std::unique_ptr<LpSolver> solver;
};

RedispatchModel::RedispatchModel(const ClearingResult& wholesale, const DayScenario& s,
                                 const NetworkTopology& topo, const RedispatchOptions& opt)
    : impl_(std::make_unique<Impl>()) {
    auto& m = *impl_;
    m.wholesale = &wholesale;
    m.s = &s;
    m.topo = &topo;
    m.regions = make_regions(topo, Design::Nodal);
    const int T = s.periods;
    const auto Tn = static_cast<std::size_t>(T);
    const int R = static_cast<int>(m.regions.names.size());

    std::map<std::string, int> bus_idx;
    for (std::size_t b = 0; b < topo.buses.size(); ++b) bus_idx[topo.buses[b]] = static_cast<int>(b);

    LinearProgram lp;
    const int g_balance = lp.add_group("power-balance");
    const int g_quota = lp.add_group("daily-quota");
    for (int r = 0; r < R; ++r)
        for (int t = 0; t < T; ++t) lp.add_row(0.0, 0.0, g_balance);
    std::vector<double> rhs(static_cast<std::size_t>(R) * Tn, 0.0);
    for (const auto& [bus, series] : s.load) {
        const int r = bus_idx.at(bus);
        for (int t = 0; t < T; ++t) rhs[static_cast<std::size_t>(r * T + t)] += series[static_cast<std::size_t>(t)];
    }

    const auto ties = tie_breaks(*s.units, opt.clearing.tie_perturbation);
    const double mu = opt.deviation_penalty;
    for (const auto& u : *s.units) {
        const int r = bus_idx.at(u.bus);
        const auto& w = wholesale.dispatch.at(u.id);
        if (!u.is_generator()) {
            // Fixed storage / interconnector injection moves to the right-hand side.
            for (int t = 0; t < T; ++t)
                rhs[static_cast<std::size_t>(r * T + t)] -= w[static_cast<std::size_t>(t)];
            continue;
        }
        const auto& avail = s.availability.at(u.id);
        Series b(Tn);
        std::vector<int> ups, dns;
        for (int t = 0; t < T; ++t) {
            const auto ti = static_cast<std::size_t>(t);
            double ub = avail[ti];
            if (u.kind == UnitKind::DailyQuota) ub = std::min(ub, u.power_cap_mw);
            b[ti] = std::clamp(w[ti], 0.0, ub);
            const double c = unit_bid(s, u.id, t) + ties.at(u.id);
            const int cu = lp.add_column(c + mu, 0.0, ub - b[ti]);
            const int cd = lp.add_column(-c + mu, 0.0, b[ti]);
            lp.add_coefficient(r * T + t, cu, 1.0);
            lp.add_coefficient(r * T + t, cd, -1.0);
            rhs[static_cast<std::size_t>(r * T + t)] -= b[ti];
            ups.push_back(cu);
            dns.push_back(cd);
        }
        if (u.kind == UnitKind::DailyQuota) {
            const int row = lp.add_row(0.0, 0.0, g_quota);
            for (int t = 0; t < T; ++t) {
                lp.add_coefficient(row, ups[static_cast<std::size_t>(t)], 1.0);
                lp.add_coefficient(row, dns[static_cast<std::size_t>(t)], -1.0);
            }
        }
        m.up[u.id] = std::move(ups);
        m.dn[u.id] = std::move(dns);
        m.base[u.id] = std::move(b);
    }

    m.links = active_links(topo, s, m.regions, 1.0);
    for (const auto& a : m.links) {
        std::vector<int> fc;
        for (int t = 0; t < T; ++t) {
            const double cap = a.unconstrained ? kInf : a.cap[static_cast<std::size_t>(t)];
            const int col = lp.add_column(0.0, -cap, cap);
            lp.add_coefficient(a.from_region * T + t, col, -1.0);
            lp.add_coefficient(a.to_region * T + t, col, 1.0);
            fc.push_back(col);
        }
        m.flow_cols.push_back(std::move(fc));
    }
    for (std::size_t k = 0; k < rhs.size(); ++k) lp.set_row_bounds(static_cast<int>(k), rhs[k], rhs[k]);
    m.solver = std::make_unique<LpSolver>(lp);
}

RedispatchModel::~RedispatchModel() = default;

ClearingResult RedispatchModel::solve(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("tuning factor must be positive");
    auto& m = *impl_;
    const auto& s = *m.s;
    const int T = s.periods;
    const auto Tn = static_cast<std::size_t>(T);

    const auto caps = scaled_link_capacity(*m.topo, s, tau);
    for (std::size_t k = 0; k < m.links.size(); ++k) {
        if (m.links[k].unconstrained) continue;
        for (std::size_t t = 0; t < Tn; ++t) {
            const double cap = caps[m.links[k].link][t];
            m.solver->set_column_bounds(m.flow_cols[k][t], -cap, cap);
        }
    }
    const LpSolution sol = m.solver->solve();
    auto value = [&](int col) { return sol.x[static_cast<std::size_t>(col)]; };

    ClearingResult res;
    res.design = Design::Nodal;
    res.tau = tau;
    res.periods = T;
    res.regions = m.regions;
    res.charge = m.wholesale->charge;
    res.discharge = m.wholesale->discharge;
    res.soc = m.wholesale->soc;
    res.ic_import = m.wholesale->ic_import;
    res.ic_export = m.wholesale->ic_export;
    const auto R = m.regions.names.size();
    res.prices.assign(R, Series(Tn, 0.0));
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t t = 0; t < Tn; ++t) res.prices[r][t] = sol.row_dual[r * Tn + t];

    double objective = 0.0;
    for (const auto& u : *s.units) {
        if (!u.is_generator()) {
            res.dispatch[u.id] = m.wholesale->dispatch.at(u.id);
            continue;
        }
        const auto& b = m.base.at(u.id);
        const auto& ups = m.up.at(u.id);
        const auto& dns = m.dn.at(u.id);
        Series p(Tn);
        for (std::size_t t = 0; t < Tn; ++t) {
            p[t] = b[t] + value(ups[t]) - value(dns[t]);
            objective += unit_bid(s, u.id, static_cast<int>(t)) * p[t] * kPeriodHours;
        }
        res.dispatch[u.id] = std::move(p);
    }
    for (const auto& u : *s.units) {
        if (u.kind != UnitKind::Interconnector) continue;
        const auto& pi = s.neighbor_price.at(u.id);
        const auto& imp = res.ic_import.at(u.id);
        const auto& exp = res.ic_export.at(u.id);
        for (std::size_t t = 0; t < Tn; ++t)
            objective += (imp[t] * ic_import_cost(pi[t], u.efficiency) -
                          exp[t] * ic_export_revenue(pi[t], u.efficiency)) *
                         kPeriodHours;
    }
    res.objective = objective;
    for (std::size_t k = 0; k < m.links.size(); ++k) {
        Series f(Tn);
        for (std::size_t t = 0; t < Tn; ++t) f[t] = value(m.flow_cols[k][t]);
        res.flows[m.links[k].link] = std::move(f);
    }
    return res;
}

ClearingResult redispatch(const ClearingResult& wholesale, const DayScenario& s,
                          const NetworkTopology& topo, double tau, const RedispatchOptions& opt) {
    RedispatchModel model(wholesale, s, topo, opt);
    return model.solve(tau);
}

GroupMap default_groups(const DayScenario& s, const NetworkTopology& topo) {
    GroupMap g;
    for (const auto& u : *s.units) {
        if (!u.is_generator()) continue;
        g[u.id] = std::string(to_string(u.tech)) + "/" + to_string(topo.bands.at(u.bus));
    }
    return g;
}

BalancingOutcome balancing_volume(const ClearingResult& wholesale, const ClearingResult& nodal,
                                  const GroupMap& groups) {
    const auto Tn = static_cast<std::size_t>(wholesale.periods);
    // Generators are exactly the units whose dispatch differs in kind from
    // storage/IC; both results carry all units, so the partition check runs
    // against the storage/IC maps.
    for (const auto& [unit, series] : wholesale.dispatch) {
        const bool flexible = wholesale.charge.count(unit) || wholesale.ic_import.count(unit);
        const bool grouped = groups.count(unit) > 0;
        if (flexible && grouped)
            throw std::invalid_argument("group map contains non-generator unit " + unit);
        if (!flexible && !grouped)
            throw std::invalid_argument("group map misses generator unit " + unit);
    }
    for (const auto& [unit, group] : groups)
        if (!wholesale.dispatch.count(unit))
            throw std::invalid_argument("group map references unknown unit " + unit);

    BalancingOutcome out;
    out.period_up.assign(Tn, 0.0);
    out.period_down.assign(Tn, 0.0);

    std::map<std::string, std::vector<std::string>> members;
    for (const auto& [unit, group] : groups) members[group].push_back(unit);

    for (const auto& [group, units] : members) {
        Series up(Tn, 0.0), down(Tn, 0.0);
        for (std::size_t t = 0; t < Tn; ++t) {
            double delta = 0.0, pos = 0.0, neg = 0.0;
            std::vector<double> d(units.size());
            for (std::size_t i = 0; i < units.size(); ++i) {
                d[i] = (nodal.dispatch.at(units[i])[t] - wholesale.dispatch.at(units[i])[t]) *
                       kPeriodHours;
                delta += d[i];
                if (d[i] > 0.0) pos += d[i];
                if (d[i] < 0.0) neg -= d[i];
            }
            if (delta > 0.0) up[t] = delta;
            if (delta < 0.0) down[t] = -delta;
            for (std::size_t i = 0; i < units.size(); ++i) {
                auto& uu = out.unit_up[units[i]];
                auto& ud = out.unit_down[units[i]];
                if (uu.empty()) uu.assign(Tn, 0.0);
                if (ud.empty()) ud.assign(Tn, 0.0);
                if (delta > 0.0 && d[i] > 0.0) uu[t] = delta * d[i] / pos;
                if (delta < 0.0 && d[i] < 0.0) ud[t] = -delta * -d[i] / neg;
            }
            out.period_up[t] += up[t];
            out.period_down[t] += down[t];
            out.volume_up += up[t];
            out.volume_down += down[t];
        }
        out.group_up[group] = std::move(up);
        out.group_down[group] = std::move(down);
    }
    return out;
}

namespace {

// Consumes `volume` from a sorted stack; the remainder beyond the stack is
// priced at the last entry.
double consume(const std::vector<StackEntry>& stack, double volume, int& warnings) {
    double cost = 0.0;
    double left = volume;
    for (const auto& e : stack) {
        if (left <= 0.0) break;
        const double take = std::min(left, e.volume);
        cost += take * e.price;
        left -= take;
    }
    if (left > 1e-9) {
        ++warnings;
        cost += left * (stack.empty() ? 0.0 : stack.back().price);
    }
    return cost;
}

}  // namespace

BalancingPrice price_balancing(const BalancingOutcome& outcome,
                               const ObservedBalancingRecord& record) {
    BalancingPrice p;
    auto offers = record.accepted_offers;
    auto bids = record.accepted_bids;
    std::stable_sort(offers.begin(), offers.end(),
                     [](const StackEntry& a, const StackEntry& b) { return a.price < b.price; });
    std::stable_sort(bids.begin(), bids.end(),
                     [](const StackEntry& a, const StackEntry& b) { return a.price > b.price; });
    p.cost_offers = consume(offers, outcome.volume_up, p.exhausted_warnings);
    p.receipt_bids = consume(bids, outcome.volume_down, p.exhausted_warnings);
    p.bm_cost = p.cost_offers - p.receipt_bids;
    p.mean_offer = outcome.volume_up > 0.0 ? p.cost_offers / outcome.volume_up : 0.0;
    p.mean_bid = outcome.volume_down > 0.0 ? p.receipt_bids / outcome.volume_down : 0.0;

    const auto Tn = outcome.period_up.size();
    p.period_cost.assign(Tn, 0.0);
    for (std::size_t t = 0; t < Tn; ++t)
        p.period_cost[t] = p.mean_offer * outcome.period_up[t] - p.mean_bid * outcome.period_down[t];
    for (const auto& [unit, up] : outcome.unit_up) {
        const auto& down = outcome.unit_down.at(unit);
        Series rev(Tn, 0.0);
        double total = 0.0;
        for (std::size_t t = 0; t < Tn; ++t) {
            rev[t] = p.mean_offer * up[t] - p.mean_bid * down[t];
            total += rev[t];
        }
        p.unit_revenue[unit] = total;
        p.unit_period_revenue[unit] = std::move(rev);
    }
    return p;
}

}  // namespace zonalsim
