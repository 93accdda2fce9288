#include "zonalsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zonalsim/dates.hpp"

namespace zonalsim {

namespace {

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

struct Staged {
    DesignOutcome outcome;
    DesignDay day;
};

Staged run_design(Design design, const ClearingResult* national, const DayScenario& s,
                  const NetworkTopology& topo, double tau, const RunConfig& cfg) {
    Staged st;
    auto& d = st.outcome;
    d.wholesale = design == Design::National && national ? *national : clear(s, topo, design, tau);
    d.actual = redispatch(d.wholesale, s, topo, tau, cfg.calibration.redispatch);
    d.balancing = balancing_volume(d.wholesale, d.actual, default_groups(s, topo));
    d.balancing_price = price_balancing(d.balancing, s.observed_balancing);
    d.rent = congestion_rent(d.wholesale, s, topo);

    SettlementConfig sc;
    sc.markup = cfg.markup;
    const auto ledger = settle(d, s, topo, sc);

    auto& out = st.day;
    out.design = design;
    out.objective = d.wholesale.objective;
    out.consumer = consumer_costs(ledger);
    out.regions = d.wholesale.regions.names;
    out.prices = d.wholesale.prices;
    out.volume_up = d.balancing.volume_up;
    out.volume_down = d.balancing.volume_down;
    out.bm_cost = d.balancing_price.bm_cost;
    out.exhausted_warnings = d.balancing_price.exhausted_warnings;
    for (std::size_t t = 0; t < ledger.congestion_rent_intra.size(); ++t) {
        out.rent_intra += ledger.congestion_rent_intra[t];
        out.rent_ic += ledger.congestion_rent_ic[t];
        out.ic_trade += ledger.ic_trade[t];
    }
    out.market_curtailment = market_curtailment(d, s);
    out.redispatch_curtailment = redispatch_curtailment(d, s);
    out.welfare = design_welfare(d, s, topo, cfg.markup);
    for (const auto& u : *s.units)
        if (u.kind != UnitKind::Interconnector) out.surplus[u.id] = unit_surplus(u, ledger, d, s, cfg.markup);
    return st;
}

double total_surplus(const DesignDay& d) {
    double s = 0.0;
    for (const auto& [u, x] : d.surplus) s += x.total();
    return s;
}

}  // namespace

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!abort.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                abort = true;
            }
        }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), std::max<std::size_t>(1, n));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < workers; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
}

const DesignDay* DayResult::find(Design d) const {
    for (const auto& x : designs)
        if (x.design == d) return &x;
    return nullptr;
}

void validate_run_config(const RunConfig& cfg) {
    if (cfg.designs.empty()) throw std::invalid_argument("no designs selected");
    if (cfg.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
    if (cfg.rent_share < 0.0 || cfg.rent_share > 1.0)
        throw std::invalid_argument("--rent-share must lie in [0, 1]");
    if (!std::isfinite(cfg.markup)) throw std::invalid_argument("--markup must be finite");
    if (cfg.policy && (*cfg.policy < 1 || *cfg.policy > 3))
        throw std::invalid_argument("--policy must be none, 1, 2 or 3");
    const bool zonal = std::find(cfg.designs.begin(), cfg.designs.end(), Design::Zonal) != cfg.designs.end();
    if (cfg.policy && !zonal) throw std::invalid_argument("policies need the zonal design");
    if (cfg.from && !parse_date(*cfg.from)) throw std::invalid_argument("--from must be YYYY-MM-DD");
    if (cfg.to && !parse_date(*cfg.to)) throw std::invalid_argument("--to must be YYYY-MM-DD");
    if (cfg.from && cfg.to && *cfg.from > *cfg.to) throw std::invalid_argument("--from is after --to");
}

DayResult run_day(DayScenario day, const NetworkTopology& topo, const CostInputs& cost,
                  const std::shared_ptr<const UnitRegistry>& units, const RunConfig& cfg,
                  const LogSink& log) {
    DayResult r;
    r.date = day.date;
    auto note = [&](const char* stage, Clock::time_point t0, const std::string& extra = {}) {
        if (!log) return;
        std::ostringstream os;
        os << "day=" << day.date << " stage=" << stage << " ms=" << ms_since(t0);
        if (!extra.empty()) os << ' ' << extra;
        log(os.str());
    };

    auto t0 = Clock::now();
    day.units = units;
    apply_cost_model(day, cost);
    note("cost-model", t0);

    t0 = Clock::now();
    const auto national = clear(day, topo, Design::National, 1.0);
    if (cfg.calibrate) {
        r.calibration = calibrate(day, topo, day.observed_balancing.congestion_volume, cfg.calibration, &national);
        r.tau = r.calibration.tau;
    } else {
        r.tau = cfg.fixed_tau;
        r.calibration.tau = r.tau;
        r.calibration.converged = true;
        r.calibration.target_volume = day.observed_balancing.congestion_volume;
    }
    {
        std::ostringstream os;
        os << "tau=" << r.tau << " iterations=" << r.calibration.iterations
           << " converged=" << (r.calibration.converged ? 1 : 0);
        note("calibrate", t0, os.str());
    }

    std::vector<Design> designs = cfg.designs;
    std::sort(designs.begin(), designs.end());
    designs.erase(std::unique(designs.begin(), designs.end()), designs.end());
    std::map<Design, DesignOutcome> outcomes;
    for (Design d : designs) {
        t0 = Clock::now();
        auto st = run_design(d, &national, day, topo, r.tau, cfg);
        outcomes[d] = std::move(st.outcome);
        r.designs.push_back(std::move(st.day));
        note(to_string(d), t0);
    }

    const auto n_it = outcomes.find(Design::National);
    const auto z_it = outcomes.find(Design::Zonal);
    if (n_it != outcomes.end() && z_it != outcomes.end()) {
        const auto& n = n_it->second;
        const auto& z = z_it->second;
        const DesignDay& nd = *r.find(Design::National);
        const DesignDay& zd = *r.find(Design::Zonal);

        for (int t = 0; t < day.periods; ++t) {
            std::vector<double> zp;
            for (const auto& p : z.wholesale.prices) zp.push_back(p[static_cast<std::size_t>(t)]);
            r.classification.push_back(classify_period(zp, national_price_setter(n.wholesale, day, t)));
        }

        auto seb = seb_bottom_up(nd.welfare, zd.welfare);
        seb.total_top_down = seb_top_down(nd.consumer.total() - zd.consumer.total(),
                                          total_surplus(zd) - total_surplus(nd),
                                          0.5 * (zd.welfare.ic_rent - nd.welfare.ic_rent));
        r.seb = seb;
        r.unlocked = unlocked_wind(n.actual, z.actual, day, cfg.emission_factor);

        // Load-weighted reference price per period and the unscaled FTR spread.
        const auto& regions = z.wholesale.regions;
        std::vector<Series> region_load(regions.names.size(), Series(static_cast<std::size_t>(day.periods), 0.0));
        for (std::size_t b = 0; b < topo.buses.size(); ++b) {
            auto it = day.load.find(topo.buses[b]);
            if (it == day.load.end()) continue;
            auto& rl = region_load[static_cast<std::size_t>(regions.bus_region[b])];
            for (std::size_t t = 0; t < rl.size(); ++t) rl[t] += it->second[t];
        }
        for (std::size_t k = 0; k < regions.names.size(); ++k) {
            double e = 0.0;
            for (double v : region_load[k]) e += v * kPeriodHours;
            r.zone_load_mwh[regions.names[k]] = e;
        }
        Series pref(static_cast<std::size_t>(day.periods));
        for (std::size_t t = 0; t < pref.size(); ++t) {
            std::vector<double> zp, zl;
            for (std::size_t k = 0; k < regions.names.size(); ++k) {
                zp.push_back(z.wholesale.prices[k][t]);
                zl.push_back(region_load[k][t]);
            }
            pref[t] = reference_price(zp, zl);
        }
        std::map<std::string, std::size_t> bus_idx;
        for (std::size_t b = 0; b < topo.buses.size(); ++b) bus_idx[topo.buses[b]] = b;
        for (const auto& u : *day.units) {
            if (!u.is_generator()) continue;
            const auto& own = z.wholesale.prices[static_cast<std::size_t>(
                regions.bus_region[bus_idx.at(u.bus)])];
            r.ftr_spread[u.id] = ftr_spread_payout(z.wholesale.dispatch.at(u.id), pref, own);
        }
    }
    return r;
}

RunResults run_bundle(const Bundle& bundle, const RunConfig& cfg, const LogSink& log) {
    validate_run_config(cfg);
    RunResults res;
    res.config = cfg;
    const auto cost = prepare_cost_inputs(*bundle.units, bundle.history, cfg.seed, cfg.cost);
    auto units = std::make_shared<const UnitRegistry>(with_inferred_rocs(*bundle.units, cost.rocs));

    const DateRange range{cfg.from, cfg.to};
    std::vector<const DayScenario*> todo;
    for (const auto& d : bundle.days)
        if (range.contains(d.date)) todo.push_back(&d);
    res.days.resize(todo.size());

    std::mutex log_mutex;
    LogSink safe_log;
    if (log)
        safe_log = [&](const std::string& line) {
            std::lock_guard<std::mutex> lock(log_mutex);
            log(line);
        };

    parallel_for(todo.size(), cfg.jobs, [&](std::size_t i) {
        const auto& day = *todo[i];
        try {
            res.days[i] = run_day(day, bundle.topology, cost, units, cfg, safe_log);
        } catch (const std::exception& e) {
            res.days[i] = DayResult{};
            res.days[i].date = day.date;
            res.days[i].error = e.what();
            if (safe_log) safe_log("day=" + day.date + " stage=error message=\"" + e.what() + "\"");
            if (cfg.fail_fast) throw;
        }
    });

    summarize(res, *units, bundle.topology);
    return res;
}

std::vector<CalibrationResult> calibrate_bundle(const Bundle& bundle, const RunConfig& cfg) {
    validate_run_config(cfg);
    const auto cost = prepare_cost_inputs(*bundle.units, bundle.history, cfg.seed, cfg.cost);
    auto units = std::make_shared<const UnitRegistry>(with_inferred_rocs(*bundle.units, cost.rocs));
    const DateRange range{cfg.from, cfg.to};
    std::vector<const DayScenario*> todo;
    for (const auto& d : bundle.days)
        if (range.contains(d.date)) todo.push_back(&d);
    std::vector<CalibrationResult> out(todo.size());
    parallel_for(todo.size(), cfg.jobs, [&](std::size_t i) {
        DayScenario day = *todo[i];
        day.units = units;
        apply_cost_model(day, cost);
        out[i] = calibrate(day, bundle.topology, day.observed_balancing.congestion_volume, cfg.calibration);
    });
    return out;
}

Bundle load_run_bundle(const RunConfig& cfg) {
    if (!std::filesystem::is_directory(cfg.bundle))
        throw DataError(cfg.bundle.string() + ": bundle directory not found");
    const auto dates = bundle_dates(cfg.bundle);
    if (dates.empty()) throw DataError(cfg.bundle.string() + ": bundle has no days");
    const std::string lo = cfg.from.value_or(dates.front());
    const std::string hi = cfg.to.value_or(dates.back());
    if (lo < dates.front() || hi > dates.back() || lo > dates.back() || hi < dates.front())
        throw DataError("date range " + lo + ".." + hi + " outside bundle coverage " + dates.front() +
                        ".." + dates.back());
    if (lo > hi) throw DataError("date range " + lo + ".." + hi + " is empty");
    auto bundle = load_bundle(cfg.bundle, DateRange{lo, hi});
    if (bundle.days.empty()) throw DataError("no bundle days in " + lo + ".." + hi);
    return bundle;
}

RunResults run(const RunConfig& cfg, const LogSink& log) {
    validate_run_config(cfg);
    return run_bundle(load_run_bundle(cfg), cfg, log);
}

void summarize(RunResults& r, const UnitRegistry& units, const NetworkTopology& topo) {
    r.months.clear();
    r.producers.clear();
    r.policy.reset();
    r.regression.reset();
    r.regression_note.reset();
    r.volatility.clear();
    r.class_counts.clear();
    r.unlocked = {};
    r.failed_days = r.exhausted_warnings = r.calibration_warnings = r.policy_warnings = 0;
    r.zonal_volume_above_national.clear();

    for (const auto& u : units) {
        r.unit_tech[u.id] = u.tech;
        r.unit_zone[u.id] = topo.zones.at(u.bus);
    }

    std::map<Design, std::map<std::string, std::vector<double>>> price_obs;
    std::map<std::string, UnitSurplus> sur_n, sur_z;
    std::map<std::string, double> ftr;
    std::map<std::string, std::pair<double, std::size_t>> zone_price_sum;
    double nat_price_sum = 0.0;
    std::size_t nat_price_n = 0;
    double rent_available = 0.0, saving = 0.0, served = 0.0;

    for (const auto& d : r.days) {
        if (d.error) {
            ++r.failed_days;
            continue;
        }
        if (d.calibration.non_monotone || !d.calibration.converged) ++r.calibration_warnings;
        const auto month = month_of(d.date);
        if (r.months.empty() || r.months.back().month != month) {
            r.months.emplace_back();
            r.months.back().month = month;
        }
        auto& m = r.months.back();
        ++m.days;
        for (const auto& dd : d.designs) {
            m.consumer[dd.design] += dd.consumer;
            r.exhausted_warnings += dd.exhausted_warnings;
            for (std::size_t k = 0; k < dd.regions.size(); ++k)
                for (double p : dd.prices[k]) price_obs[dd.design][dd.regions[k]].push_back(p);
        }
        if (const auto* nd = d.find(Design::National)) {
            m.curtailment_national_mwh += nd->redispatch_curtailment;
            for (const auto& [u, s] : nd->surplus) sur_n[u] += s;
            for (double p : nd->prices.front()) {
                nat_price_sum += p;
                ++nat_price_n;
            }
        }
        if (const auto *nd = d.find(Design::National), *zd = d.find(Design::Zonal); nd && zd) {
            const double vn = nd->volume_up + nd->volume_down, vz = zd->volume_up + zd->volume_down;
            if (vz > vn + 1e-6) r.zonal_volume_above_national.push_back(d.date);
        }
        if (const auto* zd = d.find(Design::Zonal)) {
            m.curtailment_zonal_mwh += zd->market_curtailment;
            for (const auto& [u, s] : zd->surplus) sur_z[u] += s;
            rent_available += zd->consumer.congestion_rent_income;
            served += zd->consumer.served_load_mwh;
            for (std::size_t k = 0; k < zd->regions.size(); ++k) {
                auto& acc = zone_price_sum[zd->regions[k]];
                for (double p : zd->prices[k]) acc.first += p;
                acc.second += zd->prices[k].size();
            }
            if (const auto* nd = d.find(Design::National)) saving += nd->consumer.total() - zd->consumer.total();
        }
        if (d.seb) {
            if (!m.seb) m.seb = SebComponents{};
            *m.seb += *d.seb;
        }
        m.unlocked.energy_mwh += d.unlocked.energy_mwh;
        m.unlocked.co2_tonnes += d.unlocked.co2_tonnes;
        r.unlocked.energy_mwh += d.unlocked.energy_mwh;
        r.unlocked.co2_tonnes += d.unlocked.co2_tonnes;
        for (const auto& [u, v] : d.ftr_spread) ftr[u] += v;
        for (auto c : d.classification) ++r.class_counts[to_string(c)];
    }

    for (const auto& [design, regions] : price_obs)
        for (const auto& [region, obs] : regions)
            if (obs.size() >= 2) r.volatility[design][region] = price_volatility(obs);

    const bool both = !sur_n.empty() && !sur_z.empty();
    if (both)
        for (const auto& u : units) {
            auto n = sur_n.find(u.id);
            auto z = sur_z.find(u.id);
            if (n == sur_n.end() || z == sur_z.end()) continue;
            r.producers.push_back(producer_surplus(u.id, n->second, z->second, r.config.markup));
        }

    if (both && r.config.policy) {
        PolicyRunData pd;
        for (const auto& [zone, acc] : zone_price_sum)
            pd.zone_mean_price[zone] = acc.second ? acc.first / static_cast<double>(acc.second) : 0.0;
        pd.national_mean_price = nat_price_n ? nat_price_sum / static_cast<double>(nat_price_n) : 0.0;
        pd.rent_available = rent_available;
        pd.consumer_saving_full = saving;
        pd.served_load_mwh = served;
        for (const auto& u : units) {
            if (!u.is_generator()) continue;
            auto zone = r.unit_zone.find(u.id);
            if (zone == r.unit_zone.end()) continue;
            PolicyUnitData pu;
            pu.unit = u.id;
            pu.zone = zone->second;
            pu.tech = u.tech;
            pu.cfd = u.subsidy.variant == SubsidyScheme::Variant::CfD;
            pu.national_revenue = sur_n[u.id].revenue;
            pu.zonal_revenue = sur_z[u.id].revenue;
            pu.ftr_spread_payout = ftr[u.id];
            pd.units.push_back(pu);
        }
        switch (*r.config.policy) {
            case 1: r.policy = policy1(pd); break;
            case 2: r.policy = policy2(pd, r.config.rent_share); break;
            default: r.policy = policy3(pd, r.config.rent_share); break;
        }
        r.policy_warnings = r.policy->warnings;
    }

    std::vector<std::pair<double, double>> pairs;
    for (const auto& m : r.months)
        if (m.seb) pairs.push_back({m.curtailment_national_mwh, m.seb->total_bottom_up()});
    if (pairs.size() >= 3) {
        try {
            r.regression = curtailment_regression(pairs, r.config.regression_scale);
        } catch (const std::invalid_argument& e) {
            r.regression_note = e.what();
        }
    } else if (!pairs.empty()) {
        r.regression_note = "regression needs at least 3 months";
    }
}

}  // namespace zonalsim
