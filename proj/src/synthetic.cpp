#include "zonalsim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zonalsim/dates.hpp"
#include "zonalsim/rng.hpp"

namespace zonalsim {

namespace {

constexpr double kPi = 3.141592653589793;

double r1(double x) { return std::round(x * 10.0) / 10.0; }
double r2(double x) { return std::round(x * 100.0) / 100.0; }
double r3(double x) { return std::round(x * 1000.0) / 1000.0; }

std::string padded(const std::string& prefix, int i, int n) {
    const auto width = std::to_string(std::max(n, 1)).size();
    auto s = std::to_string(i);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return prefix + s;
}

// Largest-remainder split of `total` over the mix shares.
std::map<Tech, int> unit_counts(const std::map<Tech, double>& mix, int total) {
    double sum = 0.0;
    for (const auto& [t, w] : mix) {
        if (w < 0.0) throw ConfigError("negative share for " + std::string(to_string(t)));
        sum += w;
    }
    std::map<Tech, int> out;
    if (sum <= 0.0 || total <= 0) return out;
    std::vector<std::pair<double, Tech>> rest;
    int used = 0;
    for (const auto& [t, w] : mix) {
        const double exact = total * w / sum;
        out[t] = static_cast<int>(std::floor(exact));
        used += out[t];
        rest.push_back({exact - std::floor(exact), t});
    }
    std::stable_sort(rest.begin(), rest.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; used < total && i < rest.size(); ++i, ++used) ++out[rest[i].second];
    return out;
}

struct FleetUnit {
    std::size_t index;  // into the registry
    bool north = false;
    int zone = 0;
    double cap = 0.0;   // MW, generation or storage power
    double roc = 0.0;   // planted, RO units only
};

struct Fleet {
    std::vector<FleetUnit> wind_n, wind_s, solar, nuclear, hydro, thermal, storage, ic;
    std::map<std::string, double> ic_offset;
    double gas_mean = 60.0;
    double absorb = 0.0;  // IC export plus storage charge capacity
};

void scale_caps(std::vector<FleetUnit>& v, double total, Rng& rng) {
    if (v.empty()) return;
    std::vector<double> w(v.size());
    for (auto& x : w) x = rng.uniform(0.7, 1.3);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i].cap = std::max(0.1, r1(total * w[i] / s));
}

}  // namespace

std::map<Tech, double> SyntheticConfig::default_mix() {
    return {{Tech::Wind, 0.35},    {Tech::Solar, 0.12},  {Tech::Nuclear, 0.02},
            {Tech::Hydro, 0.05},   {Tech::Gas, 0.22},    {Tech::Coal, 0.02},
            {Tech::Biomass, 0.04}, {Tech::Oil, 0.02},    {Tech::Battery, 0.10},
            {Tech::PumpedHydro, 0.02}, {Tech::Ic, 0.04}};
}

SyntheticBundle generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed) {
    if (cfg.zones < 1) throw ConfigError("zone count must be positive");
    if (cfg.buses < cfg.zones) throw ConfigError("fewer buses than zones");
    if (cfg.days < 0) throw ConfigError("negative day count");
    if (cfg.units < 1) throw ConfigError("unit count must be positive");
    if (!(cfg.peak_load_mw > 0.0)) throw ConfigError("peak load must be positive");
    const auto start = parse_date(cfg.start_date);
    if (!start) throw ConfigError("start date must be YYYY-MM-DD");
    double wsum = 0.0;
    for (double w : cfg.regime_weights) {
        if (w < 0.0) throw ConfigError("negative regime weight");
        wsum += w;
    }
    if (wsum <= 0.0) throw ConfigError("regime weights sum to zero");

    auto mix = cfg.mix;
    if (!cfg.interconnectors) mix.erase(Tech::Ic);
    const auto counts = unit_counts(mix, cfg.units);
    auto count = [&](Tech t) {
        auto it = counts.find(t);
        return it == counts.end() ? 0 : it->second;
    };
    const int thermal_count = count(Tech::Gas) + count(Tech::Coal) + count(Tech::Biomass) + count(Tech::Oil);
    if (cfg.require_thermal && thermal_count == 0)
        throw ConfigError("configuration requires thermal units but the mix yields none");
    if (cfg.require_wind && count(Tech::Wind) == 0)
        throw ConfigError("configuration requires wind units but the mix yields none");

    const double P = cfg.peak_load_mw;
    Rng rng(seed, "fleet");
    SyntheticBundle out;
    auto& topo = out.bundle.topology;

    // Topology: zones Z1 (north) .. Zn (south), buses split evenly in order.
    const int Z = cfg.zones;
    const int north_zones = Z == 1 ? 1 : std::max(1, Z / 2);
    std::vector<std::vector<std::string>> zone_buses(static_cast<std::size_t>(Z));
    std::vector<std::string> zone_names;
    for (int z = 0; z < Z; ++z) zone_names.push_back(padded("Z", z + 1, Z));
    for (int i = 0; i < cfg.buses; ++i) {
        const int z = static_cast<int>(static_cast<long long>(i) * Z / cfg.buses);
        const auto bus = padded("N", i + 1, cfg.buses);
        topo.buses.push_back(bus);
        topo.zones[bus] = zone_names[static_cast<std::size_t>(z)];
        topo.bands[bus] = z < north_zones ? Band::North : Band::South;
        zone_buses[static_cast<std::size_t>(z)].push_back(bus);
    }
    const Capacity open = Capacity::unlimited();
    for (const auto& zb : zone_buses) {
        for (std::size_t i = 1; i < zb.size(); ++i) topo.links.push_back({zb[i - 1], zb[i], open});
        if (zb.size() < 3) continue;
        const auto chords = static_cast<int>(std::lround(cfg.chord_share * static_cast<double>(zb.size())));
        for (int c = 0; c < chords; ++c) {
            const auto a = rng.below(zb.size());
            auto b = rng.below(zb.size() - 1);
            if (b >= a) ++b;
            topo.links.push_back({zb[a], zb[b], open});
        }
    }
    for (int k = 0; k + 1 < Z; ++k) {
        Boundary bd{padded("BD", k + 1, Z - 1), {}};
        const auto& za = zone_buses[static_cast<std::size_t>(k)];
        const auto& zb = zone_buses[static_cast<std::size_t>(k + 1)];
        for (int l = 0; l < std::max(1, cfg.links_per_boundary); ++l) {
            const auto cap = cfg.unconstrained_links ? open : Capacity::limited(r1(rng.uniform(1000.0, 3000.0)));
            bd.members.push_back(topo.links.size());
            topo.links.push_back({za[rng.below(za.size())], zb[rng.below(zb.size())], cap});
        }
        topo.boundaries.push_back(std::move(bd));
    }

    std::vector<std::string> north_buses, south_buses;
    for (const auto& b : topo.buses) (topo.bands[b] == Band::North ? north_buses : south_buses).push_back(b);
    if (south_buses.empty()) south_buses = north_buses;
    auto zone_of = [&](const std::string& bus) {
        const auto& z = topo.zones.at(bus);
        return static_cast<int>(std::find(zone_names.begin(), zone_names.end(), z) - zone_names.begin());
    };

    // Fleet.
    UnitRegistry units;
    Fleet fleet;
    auto add = [&](Tech tech, UnitKind kind, bool north, int idx, int n) {
        Unit u;
        u.id = padded(std::string(to_string(tech)) + "-", idx + 1, n);
        const auto& pool = north ? north_buses : south_buses;
        u.bus = pool[rng.below(pool.size())];
        u.kind = kind;
        u.tech = tech;
        units.push_back(u);
        return FleetUnit{units.size() - 1, north, zone_of(u.bus), 0.0, 0.0};
    };
    auto north_count = [](int n, double share) {
        if (n == 0) return 0;
        return std::clamp(static_cast<int>(std::lround(n * share)), 1, n);
    };

    const int nw = count(Tech::Wind);
    const int nwn = nw == 1 ? 1 : north_count(nw, 0.6);
    for (int i = 0; i < nw; ++i) {
        auto f = add(Tech::Wind, UnitKind::Simple, i < nwn, i, nw);
        (i < nwn ? fleet.wind_n : fleet.wind_s).push_back(f);
    }
    for (int i = 0; i < count(Tech::Solar); ++i) fleet.solar.push_back(add(Tech::Solar, UnitKind::Simple, false, i, count(Tech::Solar)));
    for (int i = 0; i < count(Tech::Nuclear); ++i) fleet.nuclear.push_back(add(Tech::Nuclear, UnitKind::Simple, false, i, count(Tech::Nuclear)));
    for (int i = 0; i < count(Tech::Hydro); ++i) fleet.hydro.push_back(add(Tech::Hydro, UnitKind::DailyQuota, true, i, count(Tech::Hydro)));
    std::vector<FleetUnit> thermal_n, thermal_s;
    for (Tech t : {Tech::Gas, Tech::Coal, Tech::Biomass, Tech::Oil}) {
        const int n = count(t);
        const double share = t == Tech::Gas ? 0.2 : t == Tech::Biomass ? 0.3 : 0.0;
        const int nn = share > 0.0 && Z > 1 && n > 1 ? north_count(n, share) : 0;
        for (int i = 0; i < n; ++i) {
            auto f = add(t, UnitKind::Thermal, i < nn, i, n);
            (i < nn ? thermal_n : thermal_s).push_back(f);
        }
    }
    std::vector<FleetUnit> battery, pumped;
    for (int i = 0; i < count(Tech::Battery); ++i) battery.push_back(add(Tech::Battery, UnitKind::Storage, false, i, count(Tech::Battery)));
    for (int i = 0; i < count(Tech::PumpedHydro); ++i) pumped.push_back(add(Tech::PumpedHydro, UnitKind::Storage, false, i, count(Tech::PumpedHydro)));
    for (int i = 0; i < count(Tech::Ic); ++i) fleet.ic.push_back(add(Tech::Ic, UnitKind::Interconnector, false, i, count(Tech::Ic)));

    scale_caps(fleet.wind_n, 0.8 * P, rng);
    scale_caps(fleet.wind_s, 0.5 * P, rng);
    scale_caps(fleet.solar, 0.15 * P, rng);
    scale_caps(fleet.nuclear, 0.08 * P, rng);
    scale_caps(fleet.hydro, 0.04 * P, rng);
    scale_caps(battery, 0.04 * P, rng);
    scale_caps(pumped, 0.02 * P, rng);
    scale_caps(fleet.ic, 0.10 * P, rng);

    for (auto* group : {&battery, &pumped}) {
        const double hours = group == &battery ? 2.0 : 6.0;
        for (auto& f : *group) {
            auto& u = units[f.index];
            u.power_cap_mw = f.cap;
            u.energy_cap_mwh = r1(f.cap * hours);
            u.damping = r2(rng.uniform(0.9, 1.0));
            fleet.absorb += u.effective_power_cap();
            fleet.storage.push_back(f);
        }
    }
    for (auto& f : fleet.ic) {
        auto& u = units[f.index];
        u.import_cap_mw = f.cap;
        u.export_cap_mw = f.cap;
        u.ramp_mw = r1(2.0 * f.cap);
        u.efficiency = 0.97;
        fleet.absorb += f.cap;
        fleet.ic_offset[u.id] = rng.uniform(-10.0, 10.0);
    }
    scale_caps(thermal_n, 0.3 * P, rng);
    scale_caps(thermal_s, 1.2 * P + fleet.absorb, rng);
    std::vector<double> gas_costs;
    for (auto* group : {&thermal_n, &thermal_s})
        for (auto& f : *group) {
            auto& u = units[f.index];
            double c = 0.0;
            switch (u.tech) {
                case Tech::Gas: c = rng.uniform(55.0, 85.0); break;
                case Tech::Coal: c = rng.uniform(70.0, 95.0); break;
                case Tech::Biomass: c = rng.uniform(40.0, 70.0); break;
                default: c = rng.uniform(120.0, 160.0); break;
            }
            u.base_cost = r2(c);
            if (u.tech == Tech::Gas) gas_costs.push_back(*u.base_cost);
            fleet.thermal.push_back(f);
        }
    if (!gas_costs.empty())
        fleet.gas_mean = std::accumulate(gas_costs.begin(), gas_costs.end(), 0.0) /
                         static_cast<double>(gas_costs.size());
    for (auto& f : fleet.hydro) {
        auto& u = units[f.index];
        u.power_cap_mw = f.cap;
        u.daily_quota_mwh = r1(f.cap * 24.0 * rng.uniform(0.3, 0.5));
    }

    // Subsidies and planted ROCs.
    std::vector<FleetUnit*> ro_units;
    for (auto& f : fleet.wind_n) ro_units.push_back(&f);
    for (auto& f : fleet.hydro) ro_units.push_back(&f);
    for (auto& f : fleet.wind_s) {
        auto& u = units[f.index];
        u.subsidy = rng.uniform() < 0.7 ? SubsidyScheme::cfd(r2(rng.uniform(40.0, 150.0)))
                                        : SubsidyScheme::none();
    }
    for (auto& f : fleet.solar) {
        auto& u = units[f.index];
        const double r = rng.uniform();
        if (r < 0.4) ro_units.push_back(&f);
        else if (r < 0.8) u.subsidy = SubsidyScheme::cfd(r2(rng.uniform(50.0, 120.0)));
    }
    auto& history = out.bundle.history;
    bool first = true;
    for (auto* f : ro_units) {
        auto& u = units[f->index];
        u.subsidy = SubsidyScheme::ro(std::nullopt);
        f->roc = r2(rng.uniform(20.0, 65.0));
        std::vector<double> bids;
        if (first || rng.uniform() < 0.8) {
            for (int k = 0; k < 6; ++k) bids.push_back(-f->roc);
            for (int k = 0; k < 2; ++k) bids.push_back(r2(-rng.uniform(0.0, 80.0)));
        }
        if (!bids.empty()) history.bid_history[u.id] = std::move(bids);
        first = false;
    }
    for (const auto& f : fleet.nuclear) {
        const auto& u = units[f.index];
        for (int d = cfg.history_days; d >= 1; --d) {
            const auto date = add_days(cfg.start_date, -d);
            for (int k = 0; k < 2; ++k) {
                DispatchRecord rec;
                rec.date = date;
                rec.period = static_cast<int>(rng.below(kPeriodsPerDay));
                rec.unit = u.id;
                rec.mel = f.cap;
                const bool running = rng.uniform() < 0.9;
                rec.mw = r1(f.cap * (running ? rng.uniform(0.5, 1.0) : rng.uniform(0.0, 0.05)));
                rec.gb_price = r2(running ? rng.uniform(-76.0, 90.0) : rng.uniform(-150.0, -80.0));
                history.dispatch_history.push_back(rec);
            }
        }
    }

    out.bundle.units = std::make_shared<const UnitRegistry>(std::move(units));
    const auto& reg = *out.bundle.units;

    // Load weights by side.
    std::map<std::string, double> load_w;
    {
        double sn = 0.0, ss = 0.0;
        for (const auto& b : topo.buses) {
            load_w[b] = rng.uniform(0.5, 1.5);
            (topo.bands[b] == Band::North ? sn : ss) += load_w[b];
        }
        const double north_share = Z == 1 ? 1.0 : 0.25;
        for (auto& [b, w] : load_w)
            w *= topo.bands[b] == Band::North ? north_share / sn : (1.0 - north_share) / ss;
    }

    auto sum_cap = [](const std::vector<FleetUnit>& v) {
        double s = 0.0;
        for (const auto& f : v) s += f.cap;
        return s;
    };
    const double cap_wn = sum_cap(fleet.wind_n);
    const double cap_ws = sum_cap(fleet.wind_s);
    const int mid = north_zones - 1;  // boundary index between the halves

    for (int day = 0; day < cfg.days; ++day) {
        DayScenario d;
        d.date = add_days(cfg.start_date, day);
        d.periods = kPeriodsPerDay;
        d.units = out.bundle.units;
        Rng dr(seed, "day:" + d.date);
        const std::size_t T = kPeriodsPerDay;

        std::map<std::string, double> day_factor;
        for (const auto& f : fleet.thermal) day_factor[reg[f.index].id] = dr.uniform(0.85, 1.0);
        for (const auto& f : fleet.nuclear) day_factor[reg[f.index].id] = dr.uniform(0.85, 1.0);
        for (const auto& f : fleet.hydro) day_factor[reg[f.index].id] = dr.uniform(0.8, 1.0);
        const double solar_day = dr.uniform(0.3, 0.9);
        for (const auto& f : fleet.solar) day_factor[reg[f.index].id] = dr.uniform(0.9, 1.1);

        for (const auto& u : reg) {
            if (u.is_generator()) d.availability[u.id] = Series(T, 0.0);
            if (u.kind == UnitKind::Interconnector) d.neighbor_price[u.id] = Series(T, 0.0);
        }
        for (const auto& b : topo.buses) d.load[b] = Series(T, 0.0);
        for (const auto& b : topo.boundaries) d.boundary_ntc[b.id] = Series(T, 0.0);
        d.day_ahead_price_gb.assign(T, 0.0);
        std::vector<WindCase> regimes(T);
        double target = 0.0;

        for (std::size_t t = 0; t < T; ++t) {
            const double r = dr.uniform() * wsum;
            const WindCase regime = r < cfg.regime_weights[0]                             ? WindCase::Low
                                    : r < cfg.regime_weights[0] + cfg.regime_weights[1] ? WindCase::High
                                                                                        : WindCase::Extreme;
            regimes[t] = regime;
            const double profile = 0.5 - 0.5 * std::cos(2.0 * kPi * (static_cast<double>(t) - 11.0) / 48.0);
            double L = P * (0.60 + 0.25 * profile) * dr.uniform(0.97, 1.03);
            const double solar_shape = std::max(0.0, std::sin(kPi * (static_cast<double>(t) - 12.0) / 28.0));

            double others = 0.0;  // low-bid non-wind supply
            auto set_avail = [&](const FleetUnit& f, double mw) {
                const auto& id = reg[f.index].id;
                d.availability[id][t] = std::clamp(r3(mw), 0.0, f.cap);
                return d.availability[id][t];
            };
            for (const auto& f : fleet.nuclear) others += set_avail(f, f.cap * day_factor[reg[f.index].id]);
            for (const auto& f : fleet.hydro) others += set_avail(f, f.cap * day_factor[reg[f.index].id]);
            for (const auto& f : fleet.solar)
                others += set_avail(f, f.cap * std::min(1.0, solar_day * solar_shape * day_factor[reg[f.index].id]));
            for (const auto& f : fleet.thermal) set_avail(f, f.cap * day_factor[reg[f.index].id]);

            const double north_share = Z == 1 ? 1.0 : 0.25;
            double cf_n = 0.0, cf_s = 0.0;
            switch (regime) {
                case WindCase::Low:
                    cf_n = dr.uniform(0.05, 0.35);
                    cf_s = dr.uniform(0.05, 0.35);
                    break;
                case WindCase::High: {
                    const double ln = north_share * L;
                    cf_n = cap_wn > 0.0 ? std::min(0.95, ln * dr.uniform(1.3, 1.8) / cap_wn) : 0.0;
                    cf_s = dr.uniform(0.05, 0.3);
                    const double room = 0.85 * L - others - cf_n * cap_wn;
                    if (cf_s * cap_ws > room) cf_s = cap_ws > 0.0 ? std::max(0.0, room / cap_ws) : 0.0;
                    break;
                }
                case WindCase::Extreme: {
                    cf_n = dr.uniform(0.85, 0.95);
                    const double need = 1.1 * (L + fleet.absorb) + 0.02 * P - cf_n * cap_wn;
                    cf_s = cap_ws > 0.0 ? std::clamp(need / cap_ws, 0.05, 0.95) : 0.0;
                    const double wind = cf_n * cap_wn + cf_s * cap_ws;
                    L = std::max(0.2 * P, std::min(L, wind / 1.12 - fleet.absorb));
                    break;
                }
            }
            double wind_n = 0.0;
            for (const auto& f : fleet.wind_n) wind_n += set_avail(f, f.cap * cf_n * dr.uniform(0.92, 1.08));
            for (const auto& f : fleet.wind_s) set_avail(f, f.cap * cf_s * dr.uniform(0.92, 1.08));

            for (const auto& b : topo.buses) d.load[b][t] = r3(L * load_w[b]);

            // Boundary NTCs: ample unless this is the mid boundary in a windy period.
            std::vector<double> side_supply_n(topo.boundaries.size(), 0.0), side_supply_s(topo.boundaries.size(), 0.0);
            double load_n = 0.0;
            for (const auto& b : topo.buses)
                if (topo.bands[b] == Band::North) load_n += d.load[b][t];
            for (const auto& u : reg) {
                double mw = 0.0;
                if (u.is_generator()) mw = d.availability[u.id][t];
                else if (u.kind == UnitKind::Storage) mw = u.effective_power_cap();
                else mw = u.import_cap_mw;
                const int z = zone_of(u.bus);
                for (std::size_t k = 0; k < topo.boundaries.size(); ++k)
                    (z <= static_cast<int>(k) ? side_supply_n[k] : side_supply_s[k]) += mw;
            }
            const double surplus = wind_n - load_n;
            for (std::size_t k = 0; k < topo.boundaries.size(); ++k) {
                double ntc = std::ceil((std::max(side_supply_n[k], side_supply_s[k]) + 1.0) * 10.0) / 10.0;
                if (static_cast<int>(k) == mid && regime != WindCase::Low && surplus > 0.0) {
                    ntc = r1(dr.uniform(0.2, 0.6) * surplus);
                    if (!cfg.unconstrained_links) target += 2.0 * (surplus - ntc) * kPeriodHours;
                }
                d.boundary_ntc[topo.boundaries[k].id][t] = ntc;
            }

            const double vol = cfg.price_volatility;
            if (regime == WindCase::Extreme) {
                d.day_ahead_price_gb[t] = r2(-dr.uniform(0.0, 30.0));
                for (auto& [ic, s] : d.neighbor_price) s[t] = r2(dr.uniform(1.0, 20.0));
            } else {
                d.day_ahead_price_gb[t] =
                    r2(std::clamp(fleet.gas_mean * (1.0 + vol * dr.normal(0.0, 1.0)), 5.0, 3.0 * fleet.gas_mean));
                for (auto& [ic, s] : d.neighbor_price)
                    s[t] = r2(std::clamp((fleet.gas_mean + fleet.ic_offset[ic]) * (1.0 + vol * dr.normal(0.0, 1.0)),
                                         5.0, 3.0 * fleet.gas_mean));
            }
        }

        auto& ob = d.observed_balancing;
        ob.congestion_volume = r1(target * dr.uniform(0.8, 1.2));
        for (const auto& f : fleet.thermal) {
            const auto& u = reg[f.index];
            if (f.north) continue;
            ob.accepted_offers.push_back({r2(*u.base_cost + cfg.balancing_markup), r1(f.cap * dr.uniform(1.0, 4.0))});
        }
        for (const auto& f : fleet.wind_n)
            ob.accepted_bids.push_back({-f.roc, r1(f.cap * dr.uniform(1.0, 4.0))});

        out.regimes[d.date] = std::move(regimes);
        out.bundle.days.push_back(std::move(d));
    }
    return out;
}

}  // namespace zonalsim
